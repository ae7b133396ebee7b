#include "vcnet/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "vcnet/error.hpp"

namespace vcnet {

void RunningMoments::add(double value) noexcept {
  ++n_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (value - mean_);
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double RunningMoments::population_sd() const noexcept {
  if (n_ == 0) return 0.0;
  return std::sqrt(std::max(m2_, 0.0) / static_cast<double>(n_));
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::forward:
      return "forward";
    case Verdict::backward:
      return "backward";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

double two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

double two_sided_neg_log10_p(double z) {
  const double x = std::abs(z) / std::numbers::sqrt2;
  const double p = std::erfc(x);
  if (p > 0.0 && std::isnormal(p)) return -std::log10(p);
  // erfc(x) ~ exp(-x^2) / (x sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4))
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2);
  const double ln_p = -x2 - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
  return -ln_p / std::numbers::ln10;
}

ZTest z_test(double e_df, double sigma_df, std::size_t n_c) {
  if (!(sigma_df > 0.0)) {
    throw DegenerateError(fmt::format("z-test undefined: sigma_df = {}", sigma_df));
  }
  if (n_c < 2) throw DegenerateError(fmt::format("z-test undefined: n_c = {}", n_c));
  ZTest test;
  test.z = e_df * std::sqrt(static_cast<double>(n_c)) / sigma_df;
  test.p_value = two_sided_p(test.z);
  test.neg_log10_p = two_sided_neg_log10_p(test.z);
  return test;
}

PairAggregate decide(std::pair<std::string, std::string> pair, double e_df, double sigma_df,
                     std::size_t n_c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  PairAggregate agg;
  agg.pair = std::move(pair);
  agg.e_df = e_df;
  agg.sigma_df = sigma_df;
  agg.n_c = n_c;
  try {
    const ZTest test = z_test(e_df, sigma_df, n_c);
    agg.z = test.z;
    agg.p_value = test.p_value;
    agg.neg_log10_p = test.neg_log10_p;
    if (test.p_value < alpha && e_df > 0.0) {
      agg.verdict = Verdict::forward;
    } else if (test.p_value < alpha && e_df < 0.0) {
      agg.verdict = Verdict::backward;
    }
  } catch (const DegenerateError& e) {
    agg.diagnostic = e.what();
  }
  return agg;
}

PairAccumulator::PairAccumulator(std::pair<std::string, std::string> pair)
    : pair_(std::move(pair)) {}

void PairAccumulator::add(const PairFirmStats& stats) {
  if (stats.pair != pair_) {
    throw UsageError(fmt::format("stats for [{}, {}] added to accumulator for [{}, {}]",
                                 stats.pair.first, stats.pair.second, pair_.first, pair_.second));
  }
  if (stats.pearson) pearson_.add(*stats.pearson);
  if (stats.delta_f) {
    delta_f_.add(*stats.delta_f);
  } else {
    ++skipped_;
  }
}

void PairAccumulator::merge(const PairAccumulator& other) {
  if (other.pair_ != pair_) throw UsageError("merging accumulators of different pairs");
  pearson_.merge(other.pearson_);
  delta_f_.merge(other.delta_f_);
  skipped_ += other.skipped_;
}

PairAggregate PairAccumulator::finish(double alpha) const {
  if (delta_f_.count() == 0) {
    throw InsufficientDataError(
        fmt::format("no entity has a valid delta_f for [{}, {}]", pair_.first, pair_.second));
  }
  PairAggregate agg =
      decide(pair_, delta_f_.mean(), delta_f_.population_sd(), delta_f_.count(), alpha);
  if (pearson_.count() > 0) {
    agg.e_c = pearson_.mean();
    agg.sigma_c = pearson_.population_sd();
  }
  agg.n_pearson = pearson_.count();
  return agg;
}

PairAggregate aggregate_pair(std::span<const PairFirmStats> stats, double alpha) {
  if (stats.empty()) throw InsufficientDataError("aggregate_pair: no per-entity statistics");
  PairAccumulator acc(stats.front().pair);
  for (const auto& s : stats) acc.add(s);
  return acc.finish(alpha);
}

InfluenceNetwork build_networks(std::span<const PairAggregate> aggregates) {
  InfluenceNetwork net;
  std::set<std::pair<std::string, std::string>> seen;
  auto add_node = [&](const std::string& code) {
    if (std::find(net.nodes.begin(), net.nodes.end(), code) == net.nodes.end()) {
      net.nodes.push_back(code);
    }
  };
  for (const auto& agg : aggregates) {
    const auto& [a, b] = agg.pair;
    if (a == b) throw UsageError(fmt::format("pair [{}, {}] relates a variable to itself", a, b));
    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    if (!seen.insert(key).second) {
      throw UsageError(fmt::format("pair [{}, {}] appears more than once", a, b));
    }
    add_node(a);
    add_node(b);
    if (agg.e_c) net.undirected.push_back({a, b, *agg.e_c, agg.n_pearson});
    if (agg.verdict == Verdict::forward) {
      net.directed.push_back({a, b, *agg.neg_log10_p, *agg.p_value, agg.e_df});
    } else if (agg.verdict == Verdict::backward) {
      net.directed.push_back({b, a, *agg.neg_log10_p, *agg.p_value, -agg.e_df});
    }
  }
  return net;
}

}  // namespace vcnet
