#include "vcnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "vcnet/error.hpp"

namespace vcnet {

LabelMap labels_of(const Dataset& dataset) {
  LabelMap labels;
  for (const auto& v : dataset.variables()) labels.emplace(v.code, v.label);
  return labels;
}

namespace {

std::string node_name(const std::string& code, const LabelMap& labels) {
  auto it = labels.find(code);
  if (it == labels.end() || it->second.empty() || it->second == code) return code;
  return fmt::format("{}({})", it->second, code);
}

std::string num(std::optional<double> v, const char* spec = "{:.6g}") {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string("NA");
}

std::string exact(std::optional<double> v) { return v ? fmt::format("{}", *v) : std::string("NA"); }

using Table = std::vector<std::vector<std::string>>;

void emit(std::ostream& out, const Table& table, TableFormat format) {
  if (format == TableFormat::tsv) {
    for (const auto& row : table) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto rule = [&] {
    for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "-+-" : "") << std::string(width[c], '-');
    out << '\n';
  };
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      if (c) line += " | ";
      // Pair names left-aligned, numbers right-aligned.
      line += c == 0 ? fmt::format("{:<{}}", table[r][c], width[c])
                     : fmt::format("{:>{}}", table[r][c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
    if (r == 0) rule();
  }
}

}  // namespace

std::string pair_name(const VariablePair& pair, const LabelMap& labels) {
  return fmt::format("[{}, {}]", node_name(pair.first, labels), node_name(pair.second, labels));
}

std::string_view arrow(Verdict verdict) {
  switch (verdict) {
    case Verdict::forward:
      return "->";
    case Verdict::backward:
      return "<-";
    case Verdict::undecided:
      break;
  }
  return "";
}

std::string format_p(double p) { return fmt::format("{:.2e}", p); }

void write_correlation_table(std::ostream& out, std::span<const PairResult> pairs,
                             const LabelMap& labels, TableFormat format) {
  const bool text = format == TableFormat::text;
  Table table{{"pair", "E_C", "sigma_C", "N_C"}};
  for (const auto& pr : pairs) {
    std::optional<double> e;
    std::optional<double> s;
    std::size_t n = 0;
    if (pr.aggregate && pr.aggregate->e_c) {
      e = pr.aggregate->e_c;
      s = pr.aggregate->sigma_c;
      n = pr.aggregate->n_pearson;
    }
    table.push_back({pair_name(pr.pair, labels), num(e, text ? "{:.3g}" : "{:.6g}"),
                     num(s, text ? "{:.3g}" : "{:.6g}"), std::to_string(n)});
  }
  emit(out, table, format);
}

void write_directionality_table(std::ostream& out, std::span<const PairResult> pairs,
                                const LabelMap& labels, TableFormat format) {
  const bool text = format == TableFormat::text;
  Table table{{"pair", "E_dF", "sigma_dF", "N_dF", "z", "p", "direction"}};
  for (const auto& pr : pairs) {
    if (!pr.aggregate) {
      table.push_back({pair_name(pr.pair, labels), "NA", "NA", "0", "NA", "NA", ""});
      continue;
    }
    const auto& a = *pr.aggregate;
    table.push_back({pair_name(pr.pair, labels), num(a.e_df, text ? "{:.3g}" : "{:.6g}"),
                     num(a.sigma_df, text ? "{:.3g}" : "{:.6g}"), std::to_string(a.n_c),
                     num(a.z, "{:.3f}"), a.p_value ? format_p(*a.p_value) : std::string("NA"),
                     std::string(arrow(a.verdict))});
  }
  emit(out, table, format);
}

void write_entity_detail(std::ostream& out, std::span<const PairResult> pairs) {
  out << "entity\tfirst\tsecond\tpearson\tf_forward\tf_backward\tdelta_f\tomega_forward\tomega_backward\n";
  for (const auto& pr : pairs) {
    for (const auto& s : pr.per_entity) {
      out << s.entity << '\t' << s.pair.first << '\t' << s.pair.second << '\t' << exact(s.pearson)
          << '\t' << exact(s.f_forward) << '\t' << exact(s.f_backward) << '\t' << exact(s.delta_f)
          << '\t' << s.omega_sizes.first << '\t' << s.omega_sizes.second << '\n';
    }
  }
}

nlohmann::ordered_json network_to_json(const InfluenceNetwork& network, const LabelMap& labels,
                                       double h, double alpha) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["h"] = h;
  doc["alpha"] = alpha;
  doc["undirected_weight"] = "E_C";
  doc["directed_weight"] = "-log10(p)";
  doc["nodes"] = ordered_json::array();
  for (const auto& code : network.nodes) {
    auto it = labels.find(code);
    doc["nodes"].push_back({{"id", code}, {"label", it == labels.end() ? code : it->second}});
  }
  doc["undirected_edges"] = ordered_json::array();
  for (const auto& e : network.undirected) {
    doc["undirected_edges"].push_back(
        {{"source", e.a}, {"target", e.b}, {"weight", e.weight}, {"n", e.n}});
  }
  doc["directed_edges"] = ordered_json::array();
  for (const auto& e : network.directed) {
    doc["directed_edges"].push_back({{"source", e.from},
                                     {"target", e.to},
                                     {"weight", e.weight},
                                     {"p_value", e.p_value},
                                     {"e_df", e.e_df}});
  }
  return doc;
}

double penwidth(double weight, double min_weight, double max_weight) {
  if (!(max_weight > min_weight)) return 0.5 * (kMinPenwidth + kMaxPenwidth);
  return kMinPenwidth + (kMaxPenwidth - kMinPenwidth) * (weight - min_weight) / (max_weight - min_weight);
}

namespace {

std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

template <typename Edge, typename Weight>
std::pair<double, double> weight_range(const std::vector<Edge>& edges, Weight weight) {
  if (edges.empty()) return {0.0, 0.0};
  double lo = weight(edges.front());
  double hi = lo;
  for (const auto& e : edges) {
    lo = std::min(lo, weight(e));
    hi = std::max(hi, weight(e));
  }
  return {lo, hi};
}

void write_nodes(std::ostream& out, const InfluenceNetwork& network, const LabelMap& labels) {
  for (const auto& code : network.nodes) {
    auto it = labels.find(code);
    out << "  " << dot_id(code) << " [label=" << dot_id(it == labels.end() ? code : it->second)
        << "];\n";
  }
}

}  // namespace

void write_correlation_dot(std::ostream& out, const InfluenceNetwork& network,
                           const LabelMap& labels) {
  auto w = [](const UndirectedEdge& e) { return e.weight; };
  const auto [lo, hi] = weight_range(network.undirected, w);
  out << "// Undirected correlation network. Edge weight = E_C (cross-entity mean Pearson).\n"
      << fmt::format("// penwidth = {} + {} * (weight - {}) / ({} - {}); equal weights -> {}\n",
                     kMinPenwidth, kMaxPenwidth - kMinPenwidth, lo, hi, lo,
                     0.5 * (kMinPenwidth + kMaxPenwidth))
      << "graph correlation {\n";
  write_nodes(out, network, labels);
  for (const auto& e : network.undirected) {
    out << "  " << dot_id(e.a) << " -- " << dot_id(e.b)
        << fmt::format(" [weight={:.6g}, penwidth={:.4f}, label=\"{:.3g}\"];\n", e.weight,
                       penwidth(e.weight, lo, hi), e.weight);
  }
  out << "}\n";
}

void write_directed_dot(std::ostream& out, const InfluenceNetwork& network, const LabelMap& labels) {
  auto w = [](const DirectedEdge& e) { return e.weight; };
  const auto [lo, hi] = weight_range(network.directed, w);
  out << "// Directed influence network. Edge weight = -log10(p) of the delta_f z-test.\n"
      << fmt::format("// penwidth = {} + {} * (weight - {}) / ({} - {}); equal weights -> {}\n",
                     kMinPenwidth, kMaxPenwidth - kMinPenwidth, lo, hi, lo,
                     0.5 * (kMinPenwidth + kMaxPenwidth))
      << "digraph influence {\n";
  write_nodes(out, network, labels);
  for (const auto& e : network.directed) {
    out << "  " << dot_id(e.from) << " -> " << dot_id(e.to)
        << fmt::format(" [weight={:.6g}, penwidth={:.4f}, label=\"p={}\"];\n", e.weight,
                       penwidth(e.weight, lo, hi), format_p(e.p_value));
  }
  out << "}\n";
}

Histogram density_histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  if (bins == 0) throw UsageError("histogram needs at least one bin");
  if (!(lo < hi)) throw UsageError(fmt::format("histogram range [{}, {}] is empty", lo, hi));
  Histogram hist;
  hist.lo = lo;
  hist.hi = hi;
  std::vector<std::size_t> counts(bins, 0);
  const double span = hi - lo;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      ++hist.out_of_range;
      continue;
    }
    auto k = static_cast<std::size_t>((v - lo) / span * static_cast<double>(bins));
    ++counts[std::min(k, bins - 1)];
    ++hist.in_range;
  }
  if (hist.in_range == 0) throw InsufficientDataError("no values inside the histogram range");
  const double width = span / static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    hist.centers.push_back(lo + (static_cast<double>(k) + 0.5) * width);
    hist.density.push_back(static_cast<double>(counts[k]) /
                           (static_cast<double>(hist.in_range) * width));
  }
  return hist;
}

void write_histogram(std::ostream& out, const Histogram& hist, std::string_view statistic,
                     const VariablePair& pair) {
  out << "# statistic " << statistic << '\n'
      << "# pair " << pair.first << ',' << pair.second << '\n'
      << fmt::format("# range {} {}\n# bins {}\n# bin_width {}\n", hist.lo, hist.hi,
                     hist.centers.size(), hist.width())
      << "# in_range " << hist.in_range << '\n'
      << "# out_of_range " << hist.out_of_range << '\n'
      << "bin_center\tdensity\n";
  for (std::size_t k = 0; k < hist.centers.size(); ++k) {
    out << fmt::format("{:.6f}\t{}\n", hist.centers[k], hist.density[k]);
  }
}

}  // namespace vcnet
