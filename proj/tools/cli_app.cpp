#include "cli_app.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vcnet/error.hpp"
#include "vcnet/keyvalue.hpp"
#include "vcnet/report.hpp"
#include "vcnet/synthgen.hpp"
#include "vcnet/transforms.hpp"

namespace vcnet::cli {

namespace fs = std::filesystem;

VariablePair parse_pair(const std::string& text) {
  const auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) throw ConfigError(fmt::format("pair '{}' must look like a,b", text));
  auto a = split_list(text.substr(0, sep));
  auto b = split_list(text.substr(sep + 1));
  if (a.size() != 1 || b.size() != 1) throw ConfigError(fmt::format("pair '{}' must look like a,b", text));
  return {a[0], b[0]};
}

namespace {

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
  }
  return value;
}

std::vector<std::pair<std::string, std::string>> parse_mapping(const std::string& key,
                                                               const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError(fmt::format("{}: '{}' lacks ':'", key, item));
    auto code = split_list(item.substr(0, colon));
    auto value = split_list(item.substr(colon + 1), ';');
    if (code.size() != 1 || value.size() != 1) throw ConfigError(fmt::format("{}: bad entry '{}'", key, item));
    out.emplace_back(code[0], value[0]);
  }
  return out;
}

}  // namespace

void apply_schema_file(const std::string& path, RunConfig& config) {
  const auto kv = KeyValueConfig::load(path);
  kv.require_known({"entity_column", "year_column", "variables", "labels", "columns",
                    "revenue_normalized", "denominator", "window", "pairs"});
  auto& schema = config.schema;
  schema.entity_column = kv.get_or("entity_column", schema.entity_column);
  schema.year_column = kv.get_or("year_column", schema.year_column);
  if (kv.has("variables")) {
    schema.variables.clear();
    for (const auto& code : split_list(kv.get("variables"))) {
      schema.variables.push_back({code, default_label(code)});
    }
  }
  if (kv.has("labels")) {
    if (schema.variables.empty()) throw ConfigError("labels given without variables");
    for (const auto& [code, label] : parse_mapping("labels", kv.get("labels"))) {
      auto it = std::find_if(schema.variables.begin(), schema.variables.end(),
                             [&](const VariableId& v) { return v.code == code; });
      if (it == schema.variables.end()) throw ConfigError(fmt::format("labels: unknown code '{}'", code));
      it->label = label;
    }
  }
  if (kv.has("columns")) {
    for (const auto& [code, column] : parse_mapping("columns", kv.get("columns"))) {
      schema.columns[code] = column;
    }
  }
  if (kv.has("revenue_normalized") || kv.has("denominator")) {
    config.normalization.by_code.clear();
    for (const auto& code : split_list(kv.get_or("revenue_normalized", ""))) {
      config.normalization.by_code[code] = Normalization::revenue;
    }
    config.normalization.revenue_code = kv.get_or("denominator", "r");
  }
  if (kv.has("window")) {
    const auto& w = kv.get("window");
    const auto dash = w.find('-', 1);
    if (dash == std::string::npos) throw ConfigError(fmt::format("window '{}' must look like 1990-2018", w));
    auto lo = split_list(w.substr(0, dash));
    auto hi = split_list(w.substr(dash + 1));
    if (lo.size() != 1 || hi.size() != 1) throw ConfigError(fmt::format("window '{}' must look like 1990-2018", w));
    schema.window = std::pair{parse_int("window", lo[0]), parse_int("window", hi[0])};
  }
  if (kv.has("pairs")) {
    config.pairs.clear();
    for (const auto& item : split_list(kv.get("pairs"))) config.pairs.push_back(parse_pair(item));
  }
}

namespace {

/// Files created by one command; removed on destruction unless committed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    const fs::path path = dir_ / name;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    writer(out);
    out.flush();
    if (!out) throw Error(fmt::format("error writing '{}'", path.string()));
  }

  std::vector<fs::path> commit() {
    committed_ = true;
    return written_;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

AnalysisConfig analysis_config(const RunConfig& config) {
  AnalysisConfig ac;
  ac.h = config.h;
  ac.alpha = config.alpha;
  ac.pairs = config.pairs;
  ac.normalization = config.normalization;
  ac.threads = config.threads;
  return ac;
}

}  // namespace

std::vector<fs::path> cmd_analyze(const RunConfig& config, std::ostream& log) {
  if (config.outdir.empty()) throw ConfigError("--outdir is required");
  const Dataset dataset = load_csv(config.input, config.schema);
  const AnalysisConfig ac = analysis_config(config);
  const AnalysisResult result = analyze(dataset, ac);
  const LabelMap labels = labels_of(dataset);

  fs::create_directories(config.outdir);
  OutputSet outputs(config.outdir);
  if (config.write_tsv) {
    outputs.write("correlation_table.tsv", [&](std::ostream& o) {
      write_correlation_table(o, result.pairs, labels, TableFormat::tsv);
    });
    outputs.write("directionality_table.tsv", [&](std::ostream& o) {
      write_directionality_table(o, result.pairs, labels, TableFormat::tsv);
    });
  }
  if (config.write_text) {
    outputs.write("correlation_table.txt", [&](std::ostream& o) {
      write_correlation_table(o, result.pairs, labels, TableFormat::text);
    });
    outputs.write("directionality_table.txt", [&](std::ostream& o) {
      write_directionality_table(o, result.pairs, labels, TableFormat::text);
    });
  }
  outputs.write("entity_detail.tsv", [&](std::ostream& o) { write_entity_detail(o, result.pairs); });
  outputs.write("network.json", [&](std::ostream& o) {
    o << network_to_json(result.network, labels, config.h, config.alpha).dump(2) << '\n';
  });
  outputs.write("correlation_network.dot",
                [&](std::ostream& o) { write_correlation_dot(o, result.network, labels); });
  outputs.write("directed_network.dot",
                [&](std::ostream& o) { write_directed_dot(o, result.network, labels); });
  if (config.dump_rates) {
    outputs.write("rates.csv", [&](std::ostream& o) {
      write_rate_csv(build_rate_panel(dataset, config.normalization), o);
    });
  }

  log << fmt::format("{} entities, {} variables, window {}-{}, h = {}, alpha = {}\n",
                     dataset.entities().size(), dataset.variables().size(), dataset.period_start(),
                     dataset.period_end(), config.h, config.alpha);
  if (result.rate_diagnostics.negative_denominators > 0) {
    log << fmt::format("note: {} rate point(s) used a negative denominator\n",
                       result.rate_diagnostics.negative_denominators);
  }
  for (const auto& pr : result.pairs) {
    log << fmt::format("{}: {} entities used, {} excluded (missing/zero data), {} degenerate", pair_name(pr.pair, labels),
                       pr.per_entity.size(), pr.excluded_missing, pr.skipped_degenerate);
    if (!pr.diagnostic.empty()) log << " [" << pr.diagnostic << "]";
    if (pr.aggregate && !pr.aggregate->diagnostic.empty()) log << " [" << pr.aggregate->diagnostic << "]";
    log << '\n';
  }
  write_directionality_table(log, result.pairs, labels, TableFormat::text);
  return outputs.commit();
}

void cmd_simulate(const std::string& spec_path, const std::string& output,
                  std::optional<std::uint64_t> seed, std::ostream& log) {
  std::ifstream in(spec_path);
  if (!in) throw SpecError(fmt::format("cannot open '{}'", spec_path));
  SynthSpec spec = parse_synth_spec(in);
  if (seed) spec.seed = *seed;
  const Dataset dataset = generate(spec);

  if (output.empty() || output == "-") {
    write_csv(dataset, std::cout);
  } else {
    const fs::path path(output);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    OutputSet outputs(path.has_parent_path() ? path.parent_path() : fs::path("."));
    outputs.write(path.filename().string(), [&](std::ostream& o) { write_csv(dataset, o); });
    outputs.commit();
  }
  log << describe(spec) << '\n';
}

void cmd_hist(const RunConfig& config, const HistOptions& options, std::ostream& out) {
  const Dataset dataset = load_csv(config.input, config.schema);
  for (const auto& code : {options.pair.first, options.pair.second}) {
    if (!dataset.variable_index(code)) throw LookupError(fmt::format("unknown variable '{}' in --pair", code));
  }
  AnalysisConfig ac = analysis_config(config);
  ac.pairs = {options.pair};
  const AnalysisResult result = analyze(dataset, ac);

  std::vector<double> values;
  for (const auto& s : result.pairs.front().per_entity) {
    const auto& v = options.statistic == HistStatistic::pearson ? s.pearson : s.delta_f;
    if (v) values.push_back(*v);
  }
  if (values.empty()) {
    throw InsufficientDataError(fmt::format("no entity has data for pair [{}, {}]",
                                            options.pair.first, options.pair.second));
  }
  const Histogram hist = density_histogram(values, options.lo, options.hi, options.bins);
  const char* name = options.statistic == HistStatistic::pearson ? "pearson" : "delta_f";
  if (options.output.empty() || options.output == "-") {
    write_histogram(out, hist, name, options.pair);
    return;
  }
  const fs::path path(options.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  OutputSet outputs(path.has_parent_path() ? path.parent_path() : fs::path("."));
  outputs.write(path.filename().string(),
                [&](std::ostream& o) { write_histogram(o, hist, name, options.pair); });
  outputs.commit();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volatility-constrained correlation networks for panel time series"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  RunConfig config;
  std::string schema_path;
  std::string formats = "tsv,text";
  std::string pairs_text;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", config.input, "Long-format panel CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--h", config.h, "Volatility cutoff h (default 0.2)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", config.alpha, "Significance level (default 0.05)")
        ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"));
    cmd->add_option("--schema", schema_path, "key = value schema file")->check(CLI::ExistingFile);
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Compute tables and networks");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--outdir", config.outdir, "Output directory")->required();
  analyze_cmd->add_option("--formats", formats, "Table formats: tsv,text");
  analyze_cmd->add_option("--pairs", pairs_text, "Ordered pairs, e.g. i:m,o:m (default: all)");
  analyze_cmd->add_flag("--dump-rates", config.dump_rates, "Also write rates.csv");

  std::string spec_path;
  std::string sim_output;
  std::optional<std::uint64_t> seed;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic panel");
  simulate_cmd->add_option("--spec", spec_path, "Synthetic panel spec (key = value)")->required();
  simulate_cmd->add_option("--output", sim_output, "Output CSV (default stdout)");
  simulate_cmd->add_option("--seed", seed, "Override the spec seed");

  HistOptions hist;
  std::string pair_text;
  std::string statistic = "delta_f";
  std::vector<double> range;
  auto* hist_cmd = app.add_subcommand("hist", "Binned density of a per-entity statistic");
  add_common(hist_cmd);
  hist_cmd->add_option("--pair", pair_text, "Ordered pair, e.g. i,m")->required();
  hist_cmd->add_option("--statistic", statistic, "pearson | delta_f")
      ->check(CLI::IsMember({"pearson", "delta_f"}));
  hist_cmd->add_option("--bins", hist.bins, "Number of bins (default 40, i.e. width 0.05 on [-1, 1])")
      ->check(CLI::PositiveNumber);
  hist_cmd->add_option("--range", range, "Histogram interval: LO HI")->expected(2);
  hist_cmd->add_option("--output", hist.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (!schema_path.empty()) apply_schema_file(schema_path, config);
    if (config.alpha <= 0.0 || config.alpha >= 1.0) throw ConfigError("--alpha must lie in (0, 1)");
    if (*analyze_cmd) {
      if (!pairs_text.empty()) {
        config.pairs.clear();
        for (const auto& item : split_list(pairs_text)) config.pairs.push_back(parse_pair(item));
      }
      const auto fmts = split_list(formats);
      config.write_tsv = std::find(fmts.begin(), fmts.end(), "tsv") != fmts.end();
      config.write_text = std::find(fmts.begin(), fmts.end(), "text") != fmts.end();
      for (const auto& f : fmts) {
        if (f != "tsv" && f != "text") throw ConfigError(fmt::format("unknown format '{}'", f));
      }
      const auto files = cmd_analyze(config, out);
      out << fmt::format("wrote {} file(s) to {}\n", files.size(), config.outdir.string());
    } else if (*simulate_cmd) {
      cmd_simulate(spec_path, sim_output, seed, sim_output.empty() || sim_output == "-" ? err : out);
    } else if (*hist_cmd) {
      hist.pair = parse_pair(pair_text);
      hist.statistic = statistic == "pearson" ? HistStatistic::pearson : HistStatistic::delta_f;
      if (!range.empty()) {
        hist.lo = range[0];
        hist.hi = range[1];
      }
      cmd_hist(config, hist, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vcnet::cli
