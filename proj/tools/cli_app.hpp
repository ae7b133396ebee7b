#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vcnet/panel_store.hpp"
#include "vcnet/pipeline.hpp"

namespace vcnet::cli {

struct RunConfig {
  std::string input;
  std::filesystem::path outdir;
  double h = 0.2;
  double alpha = kDefaultAlpha;
  CsvSchema schema;
  NormalizationMap normalization = NormalizationMap::defaults();
  std::vector<VariablePair> pairs;
  bool write_tsv = true;
  bool write_text = true;
  bool dump_rates = false;
  std::size_t threads = 0;
};

/// Applies a `key = value` schema file: entity_column, year_column,
/// variables, labels, columns, revenue_normalized, denominator, window
/// (e.g. 1990-2018), pairs (e.g. "i:m, o:m").
void apply_schema_file(const std::string& path, RunConfig& config);

/// Parses "a,b" or "a:b".
VariablePair parse_pair(const std::string& text);

/// Writes every analyze artifact into config.outdir. On failure, files this
/// call created are removed before the exception propagates.
std::vector<std::filesystem::path> cmd_analyze(const RunConfig& config, std::ostream& log);

void cmd_simulate(const std::string& spec_path, const std::string& output,
                  std::optional<std::uint64_t> seed, std::ostream& log);

enum class HistStatistic { pearson, delta_f };

struct HistOptions {
  VariablePair pair;
  HistStatistic statistic = HistStatistic::delta_f;
  std::size_t bins = 40;
  double lo = -1.0;
  double hi = 1.0;
  std::string output;  // empty -> `out`
};

void cmd_hist(const RunConfig& config, const HistOptions& options, std::ostream& out);

/// Full command-line entry point. Returns the process exit status.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace vcnet::cli
