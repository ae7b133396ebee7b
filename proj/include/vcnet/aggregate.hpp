#pragma once

// Cross-entity aggregation of per-entity pair statistics, the directionality
// z-test, and the undirected/directed influence networks.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vcnet/stats_core.hpp"

namespace vcnet {

/// Count, mean and sum of squared deviations with Chan et al.'s pairwise
/// merge. Partial accumulators over disjoint chunks merge to the same
/// population moments as one pass over the concatenation.
class RunningMoments {
 public:
  void add(double value) noexcept;
  void merge(const RunningMoments& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Divide-by-n standard deviation; 0 when empty.
  double population_sd() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

enum class Verdict { forward, backward, undecided };

const char* to_string(Verdict verdict) noexcept;

inline constexpr double kDefaultAlpha = 0.05;

struct ZTest {
  double z = 0.0;
  double p_value = 1.0;      // two-sided
  double neg_log10_p = 0.0;  // finite even where p underflows
};

/// z = e_df * sqrt(n_c) / sigma_df, p = 2 * Phi(-|z|).
/// Throws DegenerateError when sigma_df <= 0 or n_c < 2.
ZTest z_test(double e_df, double sigma_df, std::size_t n_c);

/// Two-sided standard-normal tail 2 * Phi(-|z|) and its -log10.
double two_sided_p(double z);
double two_sided_neg_log10_p(double z);

struct PairAggregate {
  std::pair<std::string, std::string> pair;

  std::optional<double> e_c;  // absent when no entity has a valid Pearson
  double sigma_c = 0.0;
  std::size_t n_pearson = 0;

  double e_df = 0.0;
  double sigma_df = 0.0;
  std::size_t n_c = 0;

  std::optional<double> z;  // absent when the test is degenerate
  std::optional<double> p_value;
  std::optional<double> neg_log10_p;
  Verdict verdict = Verdict::undecided;
  std::string diagnostic;  // set when the test could not be run
};

/// Builds an aggregate from already-summarized ΔF moments and attaches the
/// z-test and verdict. Throws UsageError if alpha is outside (0, 1).
PairAggregate decide(std::pair<std::string, std::string> pair, double e_df, double sigma_df,
                     std::size_t n_c, double alpha = kDefaultAlpha);

/// Mergeable per-pair accumulator for map-reduce over entities.
class PairAccumulator {
 public:
  explicit PairAccumulator(std::pair<std::string, std::string> pair);

  /// Throws UsageError if `stats` is for a different pair.
  void add(const PairFirmStats& stats);
  void merge(const PairAccumulator& other);

  const std::pair<std::string, std::string>& pair() const noexcept { return pair_; }
  const RunningMoments& pearson() const noexcept { return pearson_; }
  const RunningMoments& delta_f() const noexcept { return delta_f_; }
  std::size_t skipped() const noexcept { return skipped_; }

  /// Throws InsufficientDataError when no entity has a valid delta_f.
  PairAggregate finish(double alpha = kDefaultAlpha) const;

 private:
  std::pair<std::string, std::string> pair_;
  RunningMoments pearson_;
  RunningMoments delta_f_;
  std::size_t skipped_ = 0;
};

/// Aggregates one pair across entities. Entries without delta_f do not count
/// toward n_c. Throws InsufficientDataError when none remain.
PairAggregate aggregate_pair(std::span<const PairFirmStats> stats, double alpha = kDefaultAlpha);

struct UndirectedEdge {
  std::string a;
  std::string b;
  double weight;  // E_C
  std::size_t n;
};

struct DirectedEdge {
  std::string from;
  std::string to;
  double weight;  // -log10(p)
  double p_value;
  double e_df;  // signed in the from -> to orientation
};

struct InfluenceNetwork {
  std::vector<std::string> nodes;  // first-appearance order
  std::vector<UndirectedEdge> undirected;
  std::vector<DirectedEdge> directed;
};

/// One undirected edge per pair with a Pearson mean, and one directed edge
/// per decided pair oriented by its verdict. Throws UsageError when two
/// aggregates cover the same unordered pair.
InfluenceNetwork build_networks(std::span<const PairAggregate> aggregates);

}  // namespace vcnet
