#pragma once

// Per-entity statistics on year-aligned rate series: population moments,
// Pearson correlation, the volatility subset and volatility-constrained (VC)
// correlation.
//
// VC correlation of (x, y) conditioned on x keeps only the years where x moves
// by at least h standard deviations from its mean,
//
//     omega_x = { t : h * sd(x) <= |x(t) - mean(x)| },
//
// and computes Pearson on those years with means and sds taken inside the
// subset. The forward value conditions on the first variable and the backward
// value on the second; their difference delta_f > 0 points from first to
// second.
//
// All moments divide by n.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vcnet {

struct MomentPair {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

/// Throws InsufficientDataError on empty input. A series whose values are all
/// identical reports sd == 0 exactly.
MomentPair moments(std::span<const double> values);

/// Throws UsageError on length mismatch or fewer than 2 points, and
/// DegenerateError when either side has zero sd. Result is clamped to [-1, 1]
/// and symmetric in its arguments bit for bit.
double pearson(std::span<const double> x, std::span<const double> y);

struct VolatilitySubset {
  std::string conditioning;  // variable code, may be empty
  double h = 0.0;
  std::vector<int> years;  // ascending
};

/// Years whose deviation from the mean is at least h * sd. Equality is kept,
/// so h == 0 and constant series both select every year. Throws UsageError on
/// h < 0, length mismatch or empty input.
VolatilitySubset omega(std::span<const int> years, std::span<const double> rates, double h);

/// Pearson on the subset years only, with moments computed inside the subset.
/// Throws DegenerateError when |subset| < 2 or a side is constant on the
/// subset; UsageError when a subset year is not in `years`.
double constrained_pearson(std::span<const int> years, std::span<const double> x,
                           std::span<const double> y, const VolatilitySubset& subset);

struct PairFirmStats {
  std::string entity;
  std::pair<std::string, std::string> pair;
  std::optional<double> pearson;
  std::optional<double> f_forward;   // conditioned on pair.first
  std::optional<double> f_backward;  // conditioned on pair.second
  std::optional<double> delta_f;     // f_forward - f_backward
  std::pair<std::size_t, std::size_t> omega_sizes{0, 0};
};

/// Pearson, both VC correlations and their difference for one entity.
/// Degenerate sides leave fields empty instead of throwing. Points are
/// processed in ascending year order, so any joint reordering of the inputs
/// gives identical results. Throws InsufficientDataError below `min_points`
/// and UsageError on misaligned input.
PairFirmStats vc_pair(std::span<const int> years, std::span<const double> x,
                      std::span<const double> y, double h, std::size_t min_points = 4);

}  // namespace vcnet
