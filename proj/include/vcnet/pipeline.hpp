#pragma once

// End-to-end analysis: rates -> per-entity pair statistics -> aggregates ->
// networks. Entities are processed in parallel; results are collected in
// entity order so output does not depend on the thread count.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcnet/aggregate.hpp"
#include "vcnet/panel_store.hpp"
#include "vcnet/stats_core.hpp"
#include "vcnet/transforms.hpp"

namespace vcnet {

using VariablePair = std::pair<std::string, std::string>;

struct AnalysisConfig {
  double h = 0.2;
  double alpha = kDefaultAlpha;
  /// Empty: every unordered pair in dataset variable order (a before b).
  std::vector<VariablePair> pairs;
  NormalizationMap normalization = NormalizationMap::defaults();
  std::size_t min_points = kMinRatePoints;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct PairResult {
  VariablePair pair;
  std::vector<PairFirmStats> per_entity;  // only entities passing complete_window
  std::size_t excluded_missing = 0;       // failed complete_window
  std::size_t skipped_degenerate = 0;     // passed, but delta_f undefined
  std::optional<PairAggregate> aggregate;
  std::string diagnostic;  // why aggregate is absent
};

struct AnalysisResult {
  std::vector<PairResult> pairs;
  RateDiagnostics rate_diagnostics;
  InfluenceNetwork network;
};

/// All unordered pairs of the dataset's variables in declaration order.
std::vector<VariablePair> all_pairs(const Dataset& dataset);

/// Throws ConfigError for h < 0, alpha outside (0, 1), unknown or repeated
/// pair variables, or a revenue-normalized variable without revenue data.
AnalysisResult analyze(const Dataset& dataset, const AnalysisConfig& config = {});

}  // namespace vcnet
