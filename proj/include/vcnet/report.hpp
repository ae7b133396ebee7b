#pragma once

// Serialization of analysis results: correlation and directionality tables
// (TSV and aligned text), per-entity detail, node-link JSON and Graphviz DOT
// networks, and binned density histograms.
//
// Every writer is deterministic: fixed column order, fixed numeric formats,
// no timestamps.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vcnet/pipeline.hpp"

namespace vcnet {

/// code -> display label.
using LabelMap = std::map<std::string, std::string, std::less<>>;

LabelMap labels_of(const Dataset& dataset);

/// "[net income(i), market capitalization(m)]"; falls back to the bare code.
std::string pair_name(const VariablePair& pair, const LabelMap& labels);

/// "->", "<-" or "".
std::string_view arrow(Verdict verdict);

/// Three significant digits in scientific notation, e.g. "2.88e-15".
std::string format_p(double p);

enum class TableFormat { tsv, text };

/// Columns: pair, E_C, sigma_C, N_C.
void write_correlation_table(std::ostream& out, std::span<const PairResult> pairs,
                             const LabelMap& labels, TableFormat format);

/// Columns: pair, E_dF, sigma_dF, N_dF, z, p, direction.
void write_directionality_table(std::ostream& out, std::span<const PairResult> pairs,
                                const LabelMap& labels, TableFormat format);

/// One row per (entity, pair) that passed the complete-case filter.
void write_entity_detail(std::ostream& out, std::span<const PairResult> pairs);

/// Node-link document: nodes, undirected edges weighted by E_C, directed
/// edges weighted by -log10 p.
nlohmann::ordered_json network_to_json(const InfluenceNetwork& network, const LabelMap& labels,
                                       double h, double alpha);

/// Graphviz `graph` with `--` edges weighted by E_C.
void write_correlation_dot(std::ostream& out, const InfluenceNetwork& network,
                           const LabelMap& labels);

/// Graphviz `digraph` with `->` edges weighted by -log10 p.
void write_directed_dot(std::ostream& out, const InfluenceNetwork& network, const LabelMap& labels);

/// Edge thickness used in the DOT files: affine in the weight, mapping the
/// smallest weight in the file to kMinPenwidth and the largest to
/// kMaxPenwidth (all edges get the midpoint when weights are equal).
inline constexpr double kMinPenwidth = 1.0;
inline constexpr double kMaxPenwidth = 8.0;
double penwidth(double weight, double min_weight, double max_weight);

struct Histogram {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> centers;
  std::vector<double> density;  // sum(density) * width == 1 when in_range > 0
  std::size_t in_range = 0;
  std::size_t out_of_range = 0;

  double width() const noexcept { return (hi - lo) / static_cast<double>(centers.size()); }
};

/// Equal-width bins on [lo, hi]; a value equal to hi lands in the last bin.
/// Throws UsageError for bins == 0 or lo >= hi, InsufficientDataError when no
/// value falls inside the range.
Histogram density_histogram(std::span<const double> values, double lo = -1.0, double hi = 1.0,
                            std::size_t bins = 40);

/// `# key value` header lines followed by `bin_center<TAB>density` rows.
void write_histogram(std::ostream& out, const Histogram& hist, std::string_view statistic,
                     const VariablePair& pair);

}  // namespace vcnet
