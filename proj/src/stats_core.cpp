#include "vcnet/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "vcnet/error.hpp"

namespace vcnet {

MomentPair moments(std::span<const double> values) {
  if (values.empty()) throw InsufficientDataError("moments of an empty series");
  const std::size_t n = values.size();
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return {values.front(), 0.0, n};
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n)), n};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw UsageError(fmt::format("pearson: length mismatch {} vs {}", x.size(), y.size()));
  }
  if (x.size() < 2) throw UsageError("pearson: need at least 2 points");
  const MomentPair mx = moments(x);
  const MomentPair my = moments(y);
  if (mx.sd == 0.0 || my.sd == 0.0) throw DegenerateError("pearson: zero standard deviation");

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double dx = x[t] - mx.mean;
    const double dy = y[t] - my.mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  // sxx * syy commutes exactly, so pearson(x, y) == pearson(y, x) bitwise.
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

namespace {

void check_aligned(std::span<const int> years, std::size_t a, std::size_t b) {
  if (years.size() != a || years.size() != b) {
    throw UsageError(fmt::format("misaligned input: {} years, {} and {} values", years.size(), a, b));
  }
}

/// Permutation sorting the points by year; rejects repeated years.
std::vector<std::size_t> year_order(std::span<const int> years) {
  std::vector<std::size_t> order(years.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return years[a] < years[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (years[order[k]] == years[order[k - 1]]) {
      throw UsageError(fmt::format("year {} appears twice", years[order[k]]));
    }
  }
  return order;
}

template <typename T>
std::vector<T> permuted(std::span<const T> values, const std::vector<std::size_t>& order) {
  std::vector<T> out;
  out.reserve(order.size());
  for (std::size_t k : order) out.push_back(values[k]);
  return out;
}

}  // namespace

VolatilitySubset omega(std::span<const int> years, std::span<const double> rates, double h) {
  if (!(h >= 0.0)) throw UsageError(fmt::format("cutoff h must be >= 0, got {}", h));
  check_aligned(years, rates.size(), rates.size());
  const auto order = year_order(years);
  const auto sorted = permuted(rates, order);
  const MomentPair m = moments(sorted);

  VolatilitySubset subset;
  subset.h = h;
  const double bound = h * m.sd;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (bound <= std::abs(sorted[k] - m.mean)) subset.years.push_back(years[order[k]]);
  }
  return subset;
}

double constrained_pearson(std::span<const int> years, std::span<const double> x,
                           std::span<const double> y, const VolatilitySubset& subset) {
  check_aligned(years, x.size(), y.size());
  if (subset.years.size() < 2) {
    throw DegenerateError(fmt::format("volatility subset has {} point(s)", subset.years.size()));
  }
  const auto order = year_order(years);
  std::vector<int> sorted_years = permuted(years, order);

  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(subset.years.size());
  ys.reserve(subset.years.size());
  std::vector<int> wanted = subset.years;
  std::sort(wanted.begin(), wanted.end());
  for (int year : wanted) {
    auto it = std::lower_bound(sorted_years.begin(), sorted_years.end(), year);
    if (it == sorted_years.end() || *it != year) {
      throw UsageError(fmt::format("subset year {} not among the input years", year));
    }
    const std::size_t k = order[static_cast<std::size_t>(it - sorted_years.begin())];
    xs.push_back(x[k]);
    ys.push_back(y[k]);
  }
  return pearson(xs, ys);
}

PairFirmStats vc_pair(std::span<const int> years, std::span<const double> x,
                      std::span<const double> y, double h, std::size_t min_points) {
  check_aligned(years, x.size(), y.size());
  if (years.size() < min_points) {
    throw InsufficientDataError(
        fmt::format("vc_pair: {} point(s), need at least {}", years.size(), min_points));
  }
  const auto order = year_order(years);
  const auto ty = permuted(years, order);
  const auto tx = permuted(x, order);
  const auto tyv = permuted(y, order);

  PairFirmStats stats;
  try {
    stats.pearson = pearson(tx, tyv);
  } catch (const DegenerateError&) {
  }

  const auto forward = omega(ty, tx, h);
  const auto backward = omega(ty, tyv, h);
  stats.omega_sizes = {forward.years.size(), backward.years.size()};
  try {
    stats.f_forward = constrained_pearson(ty, tx, tyv, forward);
  } catch (const DegenerateError&) {
  }
  try {
    stats.f_backward = constrained_pearson(ty, tyv, tx, backward);
  } catch (const DegenerateError&) {
  }
  if (stats.f_forward && stats.f_backward) stats.delta_f = *stats.f_forward - *stats.f_backward;
  return stats;
}

}  // namespace vcnet
