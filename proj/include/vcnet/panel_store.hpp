#pragma once

// Entity × variable × year panel data with explicit missingness, plus the
// long-format CSV reader/writer and the per-pair complete-case filter.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcnet {

struct VariableId {
  std::string code;
  std::string label;

  friend bool operator==(const VariableId&, const VariableId&) = default;
};

/// Revenue, net income, operating income, own capital, market capitalization.
std::vector<VariableId> default_variables();

/// Display label for a code: the built-in accounting name for r/i/p/o/m,
/// otherwise the code itself.
std::string default_label(std::string_view code);

/// How a variable's year-over-year change is normalized.
///   own:     (x(t+1) - x(t)) / x(t)
///   revenue: (x(t+1) - x(t)) / r(t)
enum class Normalization { own, revenue };

struct NormalizationMap {
  std::map<std::string, Normalization, std::less<>> by_code;
  std::string revenue_code = "r";

  /// {r, o, m} -> own, {i, p} -> revenue.
  static NormalizationMap defaults();

  /// Codes not listed normalize by their own prior value.
  Normalization of(std::string_view code) const;
};

/// One entity's values of one variable over the inclusive window [t_i, t_f].
/// Missing years are std::nullopt, never zero.
class PanelSeries {
 public:
  PanelSeries(std::string entity, VariableId variable, int period_start, int period_end);

  const std::string& entity() const noexcept { return entity_; }
  const VariableId& variable() const noexcept { return variable_; }
  int period_start() const noexcept { return period_start_; }
  int period_end() const noexcept { return period_end_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool contains_year(int year) const noexcept {
    return year >= period_start_ && year <= period_end_;
  }

  /// Throws LookupError for years outside the window.
  std::optional<double> at(int year) const;
  void set(int year, std::optional<double> value);

  /// Indexed by year - period_start().
  std::span<const std::optional<double>> values() const noexcept { return values_; }

  friend bool operator==(const PanelSeries&, const PanelSeries&) = default;

 private:
  std::string entity_;
  VariableId variable_;
  int period_start_;
  int period_end_;
  std::vector<std::optional<double>> values_;
};

/// Immutable-after-load panel: exactly one PanelSeries per (entity, variable),
/// all sharing the same window.
class Dataset {
 public:
  Dataset(std::vector<VariableId> variables, int period_start, int period_end);

  /// Appends an entity with all-missing series and returns its index.
  /// Throws UsageError if the entity already exists.
  std::size_t add_entity(std::string entity);

  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<VariableId>& variables() const noexcept { return variables_; }
  int period_start() const noexcept { return period_start_; }
  int period_end() const noexcept { return period_end_; }
  std::size_t num_years() const noexcept {
    return static_cast<std::size_t>(period_end_ - period_start_ + 1);
  }

  std::optional<std::size_t> entity_index(std::string_view entity) const;
  std::optional<std::size_t> variable_index(std::string_view code) const;

  const PanelSeries& series(std::size_t entity, std::size_t variable) const;
  PanelSeries& series(std::size_t entity, std::size_t variable);

  /// Throws LookupError on unknown entity or code.
  const PanelSeries& series(std::string_view entity, std::string_view code) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<VariableId> variables_;
  int period_start_;
  int period_end_;
  std::vector<std::string> entities_;
  std::map<std::string, std::size_t, std::less<>> entity_lookup_;
  std::vector<PanelSeries> series_;  // entity-major
};

/// Column layout of a long-format CSV file.
struct CsvSchema {
  std::string entity_column = "entity";
  std::string year_column = "year";
  /// Empty: every header column other than entity/year is a variable, in
  /// header order, labelled via default_label().
  std::vector<VariableId> variables;
  /// code -> header name, for columns not named after their code.
  std::map<std::string, std::string, std::less<>> columns;
  /// Declared [t_i, t_f]. Rows outside it are rejected. When absent the
  /// window is the min/max year present in the file.
  std::optional<std::pair<int, int>> window;

  std::string column_for(std::string_view code) const;
};

/// Reads long-format panel CSV. Row numbers in errors are 1-based file lines
/// (the header is line 1). Empty or non-numeric cells become missing.
Dataset read_csv(std::istream& in, const CsvSchema& schema = {});
Dataset load_csv(const std::string& path, const CsvSchema& schema = {});

/// Writes every (entity, year) in the window, entity-major, year ascending.
/// Values use the shortest representation that round-trips exactly.
void write_csv(const Dataset& dataset, std::ostream& out);

/// Fewest rate points an entity must contribute to a pair.
inline constexpr std::size_t kMinRatePoints = 4;

/// Complete-case filter for one entity and variable pair. Returns the rate
/// years [t_i, t_f - 1] when every series the pair's rates touch (both
/// variables, plus the revenue series if either is revenue-normalized) is
/// observed for all of [t_i, t_f] with nonzero denominators, and the window
/// yields at least `min_points` rates. Otherwise std::nullopt.
std::optional<std::vector<int>> complete_window(
    const Dataset& dataset, std::string_view entity,
    const std::pair<std::string, std::string>& pair,
    const NormalizationMap& normalization = NormalizationMap::defaults(),
    std::size_t min_points = kMinRatePoints);

}  // namespace vcnet
