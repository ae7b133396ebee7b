#include "vcnet/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <istream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "vcnet/error.hpp"

namespace vcnet {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

constexpr double kStartLevel = 100.0;
constexpr double kMinGrowth = 0.01;

std::optional<std::size_t> find_variable(const SynthSpec& spec, std::string_view code) {
  for (std::size_t v = 0; v < spec.variables.size(); ++v) {
    if (spec.variables[v].code == code) return v;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::size_t> topological_order(const SynthSpec& spec) {
  const std::size_t n = spec.variables.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& c : spec.coupling) {
    auto d = find_variable(spec, c.driver);
    auto t = find_variable(spec, c.target);
    if (!d || !t) {
      throw SpecError(fmt::format("coupling {} -> {} names an unknown variable", c.driver, c.target));
    }
    out[*d].push_back(*t);
    ++indegree[*t];
  }
  // Kahn's algorithm, always taking the lowest ready index.
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t t : out[v]) {
      if (--indegree[t] == 0) ready.insert(t);
    }
  }
  if (order.size() != n) throw SpecError("coupling graph has a cycle");
  return order;
}

void validate(const SynthSpec& spec) {
  if (spec.variables.empty()) throw SpecError("no variables");
  if (spec.n_entities == 0) throw SpecError("n_entities must be positive");
  if (spec.n_years < 5) throw SpecError(fmt::format("n_years must be >= 5, got {}", spec.n_years));
  if (!(spec.noise_sd > 0.0)) throw SpecError("noise_sd must be positive");
  if (!(spec.rate_scale > 0.0)) throw SpecError("rate_scale must be positive");
  std::set<std::string> codes;
  for (const auto& v : spec.variables) {
    if (v.code.empty()) throw SpecError("empty variable code");
    if (!codes.insert(v.code).second) throw SpecError(fmt::format("duplicate variable '{}'", v.code));
  }
  std::vector<double> load(spec.variables.size(), 0.0);
  for (const auto& c : spec.coupling) {
    if (!(c.strength >= 0.0 && c.strength <= 1.0)) {
      throw SpecError(fmt::format("coupling {} -> {}: strength {} outside [0, 1]", c.driver,
                                  c.target, c.strength));
    }
    if (c.driver == c.target) throw SpecError(fmt::format("coupling graph has a cycle at '{}'", c.driver));
    auto t = find_variable(spec, c.target);
    if (!t || !find_variable(spec, c.driver)) {
      throw SpecError(fmt::format("coupling {} -> {} names an unknown variable", c.driver, c.target));
    }
    load[*t] += c.strength * c.strength;
  }
  for (std::size_t v = 0; v < load.size(); ++v) {
    if (load[v] > 1.0 + 1e-12) {
      throw SpecError(fmt::format("squared coupling strengths into '{}' sum to {} > 1",
                                  spec.variables[v].code, load[v]));
    }
  }
  topological_order(spec);
  for (const auto& v : spec.variables) {
    if (spec.normalization.of(v.code) == Normalization::revenue &&
        !find_variable(spec, spec.normalization.revenue_code)) {
      throw SpecError(fmt::format("'{}' is revenue-normalized but '{}' is not generated", v.code,
                                  spec.normalization.revenue_code));
    }
  }
}

Dataset generate(const SynthSpec& spec) {
  validate(spec);
  const std::size_t n_vars = spec.variables.size();
  const auto order = topological_order(spec);

  struct Inbound {
    std::size_t driver;
    double strength;
  };
  std::vector<std::vector<Inbound>> inbound(n_vars);
  std::vector<double> noise_weight(n_vars, 1.0);
  for (const auto& c : spec.coupling) {
    const std::size_t t = *find_variable(spec, c.target);
    inbound[t].push_back({*find_variable(spec, c.driver), c.strength});
  }
  for (std::size_t v = 0; v < n_vars; ++v) {
    double load = 0.0;
    for (const auto& in : inbound[v]) load += in.strength * in.strength;
    noise_weight[v] = std::sqrt(std::max(0.0, 1.0 - load));
  }
  const auto revenue = find_variable(spec, spec.normalization.revenue_code);
  std::vector<bool> by_revenue(n_vars);
  for (std::size_t v = 0; v < n_vars; ++v) {
    by_revenue[v] = spec.normalization.of(spec.variables[v].code) == Normalization::revenue;
  }

  const int t_i = spec.start_year;
  const int t_f = spec.start_year + static_cast<int>(spec.n_years) - 1;
  Dataset dataset(spec.variables, t_i, t_f);

  const double laplace_scale = 1.0 / std::numbers::sqrt2;
  std::vector<double> signal(n_vars);
  std::vector<double> level(n_vars);
  std::vector<double> next(n_vars);

  for (std::size_t k = 0; k < spec.n_entities; ++k) {
    const std::size_t e = dataset.add_entity(fmt::format("E{:06d}", k));
    std::mt19937_64 rng(splitmix64(spec.seed + 0x9E3779B97F4A7C15ULL * (k + 1)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);

    std::fill(level.begin(), level.end(), kStartLevel);
    for (std::size_t v = 0; v < n_vars; ++v) dataset.series(e, v).set(t_i, kStartLevel);

    for (int t = t_i; t < t_f; ++t) {
      for (std::size_t v : order) {
        if (inbound[v].empty()) {
          if (spec.driver == DriverDistribution::laplace) {
            const double a = expo(rng);
            const double b = expo(rng);
            signal[v] = laplace_scale * (a - b);
          } else {
            signal[v] = gauss(rng);
          }
        } else {
          double s = 0.0;
          for (const auto& in : inbound[v]) s += in.strength * signal[in.driver];
          s += noise_weight[v] * spec.noise_sd * gauss(rng);
          signal[v] = s;
        }
      }
      for (std::size_t v = 0; v < n_vars; ++v) {
        const double rate = spec.rate_scale * signal[v];
        if (by_revenue[v]) {
          next[v] = level[v] + rate * level[*revenue];
        } else {
          next[v] = level[v] * std::max(1.0 + rate, kMinGrowth);
        }
      }
      level.swap(next);
      for (std::size_t v = 0; v < n_vars; ++v) dataset.series(e, v).set(t + 1, level[v]);
    }
  }
  return dataset;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw SpecError(fmt::format("{}: cannot parse '{}'", key, text));
  }
  return value;
}

}  // namespace

SynthSpec parse_synth_spec(const KeyValueConfig& config) {
  try {
    config.require_known({"n_entities", "n_years", "start_year", "variables", "labels", "coupling",
                          "noise_sd", "seed", "rate_scale", "driver_distribution",
                          "revenue_normalized", "denominator"});
  } catch (const SchemaError& e) {
    throw SpecError(e.what());
  }
  SynthSpec spec;
  if (!config.has("variables")) throw SpecError("missing key 'variables'");
  for (const auto& code : split_list(config.get("variables"))) {
    spec.variables.push_back({code, default_label(code)});
  }
  if (config.has("labels")) {
    for (const auto& item : split_list(config.get("labels"))) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw SpecError(fmt::format("labels: '{}' lacks ':'", item));
      const auto code = detail::trim(std::string_view(item).substr(0, colon));
      auto it = std::find_if(spec.variables.begin(), spec.variables.end(),
                             [&](const VariableId& v) { return v.code == code; });
      if (it == spec.variables.end()) throw SpecError(fmt::format("labels: unknown code in '{}'", item));
      const auto label = detail::trim(std::string_view(item).substr(colon + 1));
      it->label = label.empty() ? it->code : std::string(label);
    }
  }
  if (config.has("n_entities")) spec.n_entities = parse_number<std::size_t>("n_entities", config.get("n_entities"));
  if (config.has("n_years")) spec.n_years = parse_number<std::size_t>("n_years", config.get("n_years"));
  if (config.has("start_year")) spec.start_year = parse_number<int>("start_year", config.get("start_year"));
  if (config.has("noise_sd")) spec.noise_sd = parse_number<double>("noise_sd", config.get("noise_sd"));
  if (config.has("rate_scale")) spec.rate_scale = parse_number<double>("rate_scale", config.get("rate_scale"));
  if (config.has("seed")) spec.seed = parse_number<std::uint64_t>("seed", config.get("seed"));
  if (config.has("driver_distribution")) {
    const auto& d = config.get("driver_distribution");
    if (d == "laplace") {
      spec.driver = DriverDistribution::laplace;
    } else if (d == "normal") {
      spec.driver = DriverDistribution::normal;
    } else {
      throw SpecError(fmt::format("driver_distribution: expected laplace or normal, got '{}'", d));
    }
  }
  if (config.has("coupling")) {
    for (const auto& item : split_list(config.get("coupling"))) {
      const auto arrow = item.find("->");
      const auto colon = item.find(':');
      if (arrow == std::string::npos || colon == std::string::npos || colon < arrow) {
        throw SpecError(fmt::format("coupling: expected 'driver -> target : strength', got '{}'", item));
      }
      const std::string_view text(item);
      const auto driver = detail::trim(text.substr(0, arrow));
      const auto target = detail::trim(text.substr(arrow + 2, colon - arrow - 2));
      const auto strength = detail::trim(text.substr(colon + 1));
      if (driver.empty() || target.empty() || strength.empty()) {
        throw SpecError(fmt::format("coupling: incomplete entry '{}'", item));
      }
      spec.coupling.push_back({std::string(driver), std::string(target),
                               parse_number<double>("coupling", std::string(strength))});
    }
  }
  if (config.has("revenue_normalized") || config.has("denominator")) {
    spec.normalization.by_code.clear();
    for (const auto& code : split_list(config.get_or("revenue_normalized", ""))) {
      spec.normalization.by_code[code] = Normalization::revenue;
    }
    spec.normalization.revenue_code = config.get_or("denominator", "r");
  }
  return spec;
}

SynthSpec parse_synth_spec(std::istream& in) {
  try {
    return parse_synth_spec(KeyValueConfig::parse(in));
  } catch (const SchemaError& e) {
    throw SpecError(e.what());
  }
}

std::string describe(const SynthSpec& spec) {
  std::string vars;
  for (const auto& v : spec.variables) {
    if (!vars.empty()) vars += ", ";
    vars += v.code;
  }
  std::string links;
  for (const auto& c : spec.coupling) {
    if (!links.empty()) links += ", ";
    links += fmt::format("{} -> {} ({})", c.driver, c.target, c.strength);
  }
  return fmt::format(
      "{} entities x {} years ({}-{}), variables [{}], coupling [{}], driver {}, noise_sd {}, "
      "rate_scale {}, seed {}",
      spec.n_entities, spec.n_years, spec.start_year,
      spec.start_year + static_cast<int>(spec.n_years) - 1, vars, links.empty() ? "none" : links,
      spec.driver == DriverDistribution::laplace ? "laplace" : "normal", spec.noise_sd,
      spec.rate_scale, spec.seed);
}

}  // namespace vcnet
