#include "vcnet/panel_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "vcnet/error.hpp"

namespace vcnet {

std::vector<VariableId> default_variables() {
  return {{"r", "revenue"},
          {"i", "net income"},
          {"p", "operating income"},
          {"o", "own capital"},
          {"m", "market capitalization"}};
}

std::string default_label(std::string_view code) {
  for (const auto& v : default_variables()) {
    if (v.code == code) return v.label;
  }
  return std::string(code);
}

NormalizationMap NormalizationMap::defaults() {
  NormalizationMap map;
  map.by_code = {{"r", Normalization::own},
                 {"o", Normalization::own},
                 {"m", Normalization::own},
                 {"i", Normalization::revenue},
                 {"p", Normalization::revenue}};
  return map;
}

Normalization NormalizationMap::of(std::string_view code) const {
  auto it = by_code.find(code);
  return it == by_code.end() ? Normalization::own : it->second;
}

// ---------------------------------------------------------------------------
// PanelSeries

PanelSeries::PanelSeries(std::string entity, VariableId variable, int period_start,
                         int period_end)
    : entity_(std::move(entity)),
      variable_(std::move(variable)),
      period_start_(period_start),
      period_end_(period_end) {
  if (period_start >= period_end) {
    throw SchemaError(fmt::format("window [{}, {}] must span at least two years",
                                  period_start, period_end));
  }
  values_.resize(static_cast<std::size_t>(period_end - period_start + 1));
}

std::optional<double> PanelSeries::at(int year) const {
  if (!contains_year(year)) {
    throw LookupError(fmt::format("year {} outside [{}, {}]", year, period_start_, period_end_));
  }
  return values_[static_cast<std::size_t>(year - period_start_)];
}

void PanelSeries::set(int year, std::optional<double> value) {
  if (!contains_year(year)) {
    throw LookupError(fmt::format("year {} outside [{}, {}]", year, period_start_, period_end_));
  }
  values_[static_cast<std::size_t>(year - period_start_)] = value;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<VariableId> variables, int period_start, int period_end)
    : variables_(std::move(variables)), period_start_(period_start), period_end_(period_end) {
  if (period_start >= period_end) {
    throw SchemaError(fmt::format("window [{}, {}] must span at least two years",
                                  period_start, period_end));
  }
  for (std::size_t a = 0; a < variables_.size(); ++a) {
    if (variables_[a].code.empty()) throw SchemaError("empty variable code");
    for (std::size_t b = a + 1; b < variables_.size(); ++b) {
      if (variables_[a].code == variables_[b].code) {
        throw SchemaError(fmt::format("duplicate variable code '{}'", variables_[a].code));
      }
    }
  }
}

std::size_t Dataset::add_entity(std::string entity) {
  if (entity_lookup_.contains(entity)) {
    throw UsageError(fmt::format("entity '{}' already present", entity));
  }
  const std::size_t index = entities_.size();
  entity_lookup_.emplace(entity, index);
  for (const auto& v : variables_) {
    series_.emplace_back(entity, v, period_start_, period_end_);
  }
  entities_.push_back(std::move(entity));
  return index;
}

std::optional<std::size_t> Dataset::entity_index(std::string_view entity) const {
  auto it = entity_lookup_.find(entity);
  if (it == entity_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::variable_index(std::string_view code) const {
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].code == code) return v;
  }
  return std::nullopt;
}

const PanelSeries& Dataset::series(std::size_t entity, std::size_t variable) const {
  return series_.at(entity * variables_.size() + variable);
}

PanelSeries& Dataset::series(std::size_t entity, std::size_t variable) {
  return series_.at(entity * variables_.size() + variable);
}

const PanelSeries& Dataset::series(std::string_view entity, std::string_view code) const {
  auto e = entity_index(entity);
  if (!e) throw LookupError(fmt::format("unknown entity '{}'", entity));
  auto v = variable_index(code);
  if (!v) throw LookupError(fmt::format("unknown variable '{}'", code));
  return series(*e, *v);
}

// ---------------------------------------------------------------------------
// CSV

std::string CsvSchema::column_for(std::string_view code) const {
  auto it = columns.find(code);
  return it == columns.end() ? std::string(code) : it->second;
}

namespace {

std::optional<double> parse_cell(std::string_view cell) {
  cell = detail::trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> parse_year(std::string_view cell) {
  cell = detail::trim(cell);
  int year = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), year);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
    return std::nullopt;
  }
  return year;
}

struct Row {
  std::size_t line;
  std::string entity;
  int year;
  std::vector<std::optional<double>> values;
};

}  // namespace

Dataset read_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;

  if (!detail::read_record(in, line, line_no)) throw SchemaError("empty file: no header row");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = detail::split_csv_line(line);

  for (std::size_t a = 0; a < header.size(); ++a) {
    if (detail::trim(header[a]).empty()) {
      throw SchemaError(fmt::format("header column {} is empty", a + 1));
    }
    for (std::size_t b = a + 1; b < header.size(); ++b) {
      if (detail::trim(header[a]) == detail::trim(header[b])) {
        throw SchemaError(fmt::format("header column '{}' appears twice", header[a]));
      }
    }
  }

  auto find_column = [&](std::string_view name) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (detail::trim(header[c]) == name) return c;
    }
    throw SchemaError(fmt::format("header is missing column '{}'", name));
  };

  const std::size_t entity_col = find_column(schema.entity_column);
  const std::size_t year_col = find_column(schema.year_column);

  std::vector<VariableId> variables = schema.variables;
  if (variables.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == entity_col || c == year_col) continue;
      std::string code(detail::trim(header[c]));
      variables.push_back({code, default_label(code)});
    }
    if (variables.empty()) throw SchemaError("header has no variable columns");
  }
  std::vector<std::size_t> var_cols;
  for (const auto& v : variables) var_cols.push_back(find_column(schema.column_for(v.code)));

  std::vector<Row> rows;
  while (detail::read_record(in, line, line_no)) {
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw SchemaError(fmt::format("row {}: expected {} fields, found {}", line_no,
                                    header.size(), fields.size()));
    }
    Row row;
    row.line = line_no;
    row.entity = std::string(detail::trim(fields[entity_col]));
    if (row.entity.empty()) throw SchemaError(fmt::format("row {}: empty entity", line_no));
    auto year = parse_year(fields[year_col]);
    if (!year) {
      throw SchemaError(fmt::format("row {}: unparseable year '{}'", line_no, fields[year_col]));
    }
    row.year = *year;
    if (schema.window && (row.year < schema.window->first || row.year > schema.window->second)) {
      throw SchemaError(fmt::format("row {}: year {} outside declared window [{}, {}]", line_no,
                                    row.year, schema.window->first, schema.window->second));
    }
    for (std::size_t c : var_cols) row.values.push_back(parse_cell(fields[c]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError("file has a header but no data rows");

  int t_i = 0;
  int t_f = 0;
  if (schema.window) {
    std::tie(t_i, t_f) = *schema.window;
  } else {
    auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                        [](const Row& a, const Row& b) { return a.year < b.year; });
    t_i = lo->year;
    t_f = hi->year;
  }

  Dataset dataset(std::move(variables), t_i, t_f);
  std::map<std::pair<std::string, int>, std::size_t> seen;
  for (const auto& row : rows) {
    auto [it, inserted] = seen.emplace(std::pair{row.entity, row.year}, row.line);
    if (!inserted) {
      throw DuplicateKeyError(fmt::format("duplicate rows for entity '{}' year {}: rows {} and {}",
                                          row.entity, row.year, it->second, row.line),
                              it->second, row.line);
    }
    auto e = dataset.entity_index(row.entity);
    const std::size_t entity = e ? *e : dataset.add_entity(row.entity);
    for (std::size_t v = 0; v < row.values.size(); ++v) {
      dataset.series(entity, v).set(row.year, row.values[v]);
    }
  }
  return dataset;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(fmt::format("cannot open '{}'", path));
  return read_csv(in, schema);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << "entity,year";
  for (const auto& v : dataset.variables()) out << ',' << detail::quote_csv(v.code);
  out << '\n';
  std::string buf;
  for (std::size_t e = 0; e < dataset.entities().size(); ++e) {
    const std::string entity = detail::quote_csv(dataset.entities()[e]);
    for (int year = dataset.period_start(); year <= dataset.period_end(); ++year) {
      buf.clear();
      buf += entity;
      buf += ',';
      buf += std::to_string(year);
      for (std::size_t v = 0; v < dataset.variables().size(); ++v) {
        buf += ',';
        if (auto value = dataset.series(e, v).at(year)) buf += fmt::format("{}", *value);
      }
      buf += '\n';
      out << buf;
    }
  }
}

// ---------------------------------------------------------------------------
// complete_window

std::optional<std::vector<int>> complete_window(const Dataset& dataset, std::string_view entity,
                                                const std::pair<std::string, std::string>& pair,
                                                const NormalizationMap& normalization,
                                                std::size_t min_points) {
  const auto e = dataset.entity_index(entity);
  if (!e) throw LookupError(fmt::format("unknown entity '{}'", entity));

  auto lookup = [&](std::string_view code) {
    auto v = dataset.variable_index(code);
    if (!v) throw LookupError(fmt::format("unknown variable '{}'", code));
    return *v;
  };
  const std::size_t first = lookup(pair.first);
  const std::size_t second = lookup(pair.second);

  // Each rate touches its own series at t and t+1 plus one denominator at t.
  struct Requirement {
    std::size_t numerator;
    std::size_t denominator;
  };
  std::vector<Requirement> requirements;
  for (auto [v, code] : {std::pair{first, &pair.first}, std::pair{second, &pair.second}}) {
    if (normalization.of(*code) == Normalization::revenue) {
      auto r = dataset.variable_index(normalization.revenue_code);
      if (!r) {
        throw ConfigError(fmt::format("variable '{}' is revenue-normalized but the dataset has no '{}'",
                                      *code, normalization.revenue_code));
      }
      requirements.push_back({v, *r});
    } else {
      requirements.push_back({v, v});
    }
  }

  const int t_i = dataset.period_start();
  const int t_f = dataset.period_end();
  if (static_cast<std::size_t>(t_f - t_i) < min_points) return std::nullopt;

  for (const auto& req : requirements) {
    const auto& num = dataset.series(*e, req.numerator);
    const auto& den = dataset.series(*e, req.denominator);
    for (int t = t_i; t <= t_f; ++t) {
      if (!num.at(t) || !den.at(t)) return std::nullopt;
    }
    for (int t = t_i; t < t_f; ++t) {
      if (*den.at(t) == 0.0) return std::nullopt;
    }
  }

  std::vector<int> years;
  years.reserve(static_cast<std::size_t>(t_f - t_i));
  for (int t = t_i; t < t_f; ++t) years.push_back(t);
  return years;
}

}  // namespace vcnet
