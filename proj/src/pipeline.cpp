#include "vcnet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "vcnet/error.hpp"

namespace vcnet {

std::vector<VariablePair> all_pairs(const Dataset& dataset) {
  std::vector<VariablePair> pairs;
  const auto& vars = dataset.variables();
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) pairs.emplace_back(vars[a].code, vars[b].code);
  }
  return pairs;
}

namespace {

struct ResolvedPair {
  std::size_t first;
  std::size_t second;
};

std::vector<ResolvedPair> resolve(const Dataset& dataset, const std::vector<VariablePair>& pairs) {
  std::vector<ResolvedPair> out;
  std::set<VariablePair> seen;
  for (const auto& [a, b] : pairs) {
    auto ia = dataset.variable_index(a);
    auto ib = dataset.variable_index(b);
    if (!ia) throw ConfigError(fmt::format("pair variable '{}' not in dataset", a));
    if (!ib) throw ConfigError(fmt::format("pair variable '{}' not in dataset", b));
    if (*ia == *ib) throw ConfigError(fmt::format("pair [{}, {}] repeats a variable", a, b));
    if (!seen.insert(a < b ? VariablePair{a, b} : VariablePair{b, a}).second) {
      throw ConfigError(fmt::format("pair [{}, {}] listed twice", a, b));
    }
    out.push_back({*ia, *ib});
  }
  return out;
}

}  // namespace

AnalysisResult analyze(const Dataset& dataset, const AnalysisConfig& config) {
  if (!(config.h >= 0.0)) throw ConfigError(fmt::format("h must be >= 0, got {}", config.h));
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError(fmt::format("alpha must lie in (0, 1), got {}", config.alpha));
  }
  const auto pairs = config.pairs.empty() ? all_pairs(dataset) : config.pairs;
  const auto resolved = resolve(dataset, pairs);
  const RatePanel rates = build_rate_panel(dataset, config.normalization);

  const std::size_t n_entities = dataset.entities().size();
  const std::size_t n_pairs = pairs.size();

  // slot[e * n_pairs + p]: absent when the entity fails the complete-case filter.
  std::vector<std::optional<PairFirmStats>> slots(n_entities * n_pairs);

  auto process_entity = [&](std::size_t e) {
    const std::string& entity = dataset.entities()[e];
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t p = 0; p < n_pairs; ++p) {
      auto years = complete_window(dataset, entity, pairs[p], config.normalization, config.min_points);
      if (!years) continue;
      const auto& rx = rates.get(e, resolved[p].first);
      const auto& ry = rates.get(e, resolved[p].second);
      x.clear();
      y.clear();
      for (int t : *years) {
        x.push_back(*rx.at(t));
        y.push_back(*ry.at(t));
      }
      PairFirmStats stats = vc_pair(*years, x, y, config.h, config.min_points);
      stats.entity = entity;
      stats.pair = pairs[p];
      slots[e * n_pairs + p] = std::move(stats);
    }
  };

  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n_entities, 1));
  if (threads == 1) {
    for (std::size_t e = 0; e < n_entities; ++e) process_entity(e);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t e = next++; e < n_entities && !failed; e = next++) process_entity(e);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  AnalysisResult result;
  result.rate_diagnostics = rates.diagnostics();
  std::vector<PairAggregate> aggregates;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    PairResult pr;
    pr.pair = pairs[p];
    PairAccumulator acc(pairs[p]);
    for (std::size_t e = 0; e < n_entities; ++e) {
      auto& slot = slots[e * n_pairs + p];
      if (!slot) {
        ++pr.excluded_missing;
        continue;
      }
      acc.add(*slot);
      pr.per_entity.push_back(std::move(*slot));
    }
    pr.skipped_degenerate = acc.skipped();
    try {
      pr.aggregate = acc.finish(config.alpha);
      aggregates.push_back(*pr.aggregate);
    } catch (const InsufficientDataError& e) {
      pr.diagnostic = e.what();
    }
    result.pairs.push_back(std::move(pr));
  }
  result.network = build_networks(aggregates);
  return result;
}

}  // namespace vcnet
