#pragma once

// Year-over-year rates of change. Variables normalized by their own prior
// value (revenue, own capital, market cap by default) and variables normalized
// by prior revenue (net income, operating income) share one RateSeries type.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcnet/panel_store.hpp"

namespace vcnet {

/// Rates for years [t_i, t_f - 1]. A rate is present only when its numerator
/// pair and denominator were observed and the denominator was nonzero.
class RateSeries {
 public:
  RateSeries(std::string entity, VariableId variable, int first_year, std::size_t count);

  const std::string& entity() const noexcept { return entity_; }
  const VariableId& variable() const noexcept { return variable_; }
  int first_year() const noexcept { return first_year_; }
  int last_year() const noexcept { return first_year_ + static_cast<int>(rates_.size()) - 1; }

  std::optional<double> at(int year) const;
  std::span<const std::optional<double>> rates() const noexcept { return rates_; }
  std::size_t present_count() const noexcept;

  /// Points computed with a negative denominator (kept, sign included).
  std::size_t negative_denominators() const noexcept { return negative_denominators_; }

 private:
  friend RateSeries own_denominator_rate(const PanelSeries&);
  friend RateSeries revenue_denominator_rate(const PanelSeries&, const PanelSeries&);

  std::string entity_;
  VariableId variable_;
  int first_year_;
  std::vector<std::optional<double>> rates_;
  std::size_t negative_denominators_ = 0;
};

/// (x(t+1) - x(t)) / x(t).
RateSeries own_denominator_rate(const PanelSeries& series);

/// (x(t+1) - x(t)) / r(t). Throws UsageError if the two series belong to
/// different entities or windows.
RateSeries revenue_denominator_rate(const PanelSeries& series, const PanelSeries& revenue);

struct RateDiagnostics {
  std::size_t rate_points = 0;
  std::size_t missing_points = 0;
  std::size_t negative_denominators = 0;
};

class RatePanel {
 public:
  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<VariableId>& variables() const noexcept { return variables_; }

  const RateSeries& get(std::size_t entity, std::size_t variable) const;
  /// Throws LookupError on unknown entity or code.
  const RateSeries& get(std::string_view entity, std::string_view code) const;

  const RateDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  friend RatePanel build_rate_panel(const Dataset&, const NormalizationMap&);

  std::vector<std::string> entities_;
  std::vector<VariableId> variables_;
  std::vector<RateSeries> series_;  // entity-major
  RateDiagnostics diagnostics_;
};

/// One RateSeries per (entity, variable), dispatched on `normalization`.
/// Throws ConfigError if a revenue-normalized variable is present but the
/// revenue variable is not.
RatePanel build_rate_panel(const Dataset& dataset,
                           const NormalizationMap& normalization = NormalizationMap::defaults());

/// `entity,year,variable,rate` with empty rate for missing points.
void write_rate_csv(const RatePanel& panel, std::ostream& out);

}  // namespace vcnet
