#include "vcnet/transforms.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "vcnet/error.hpp"

namespace vcnet {

RateSeries::RateSeries(std::string entity, VariableId variable, int first_year, std::size_t count)
    : entity_(std::move(entity)),
      variable_(std::move(variable)),
      first_year_(first_year),
      rates_(count) {}

std::optional<double> RateSeries::at(int year) const {
  if (year < first_year_ || year > last_year()) {
    throw LookupError(fmt::format("rate year {} outside [{}, {}]", year, first_year_, last_year()));
  }
  return rates_[static_cast<std::size_t>(year - first_year_)];
}

std::size_t RateSeries::present_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rates_.begin(), rates_.end(), [](const auto& r) { return r.has_value(); }));
}

RateSeries own_denominator_rate(const PanelSeries& series) {
  const auto values = series.values();
  RateSeries out(series.entity(), series.variable(), series.period_start(), values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!values[k] || !values[k + 1] || *values[k] == 0.0) continue;
    if (*values[k] < 0.0) ++out.negative_denominators_;
    out.rates_[k] = (*values[k + 1] - *values[k]) / *values[k];
  }
  return out;
}

RateSeries revenue_denominator_rate(const PanelSeries& series, const PanelSeries& revenue) {
  if (series.entity() != revenue.entity()) {
    throw UsageError(fmt::format("revenue series belongs to '{}', not '{}'", revenue.entity(),
                                 series.entity()));
  }
  if (series.period_start() != revenue.period_start() ||
      series.period_end() != revenue.period_end()) {
    throw UsageError("revenue series window differs from the normalized series window");
  }
  const auto values = series.values();
  const auto denom = revenue.values();
  RateSeries out(series.entity(), series.variable(), series.period_start(), values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!values[k] || !values[k + 1] || !denom[k] || *denom[k] == 0.0) continue;
    if (*denom[k] < 0.0) ++out.negative_denominators_;
    out.rates_[k] = (*values[k + 1] - *values[k]) / *denom[k];
  }
  return out;
}

const RateSeries& RatePanel::get(std::size_t entity, std::size_t variable) const {
  return series_.at(entity * variables_.size() + variable);
}

const RateSeries& RatePanel::get(std::string_view entity, std::string_view code) const {
  auto e = std::find(entities_.begin(), entities_.end(), entity);
  if (e == entities_.end()) throw LookupError(fmt::format("unknown entity '{}'", entity));
  auto v = std::find_if(variables_.begin(), variables_.end(),
                        [&](const VariableId& id) { return id.code == code; });
  if (v == variables_.end()) throw LookupError(fmt::format("unknown variable '{}'", code));
  return get(static_cast<std::size_t>(e - entities_.begin()),
             static_cast<std::size_t>(v - variables_.begin()));
}

RatePanel build_rate_panel(const Dataset& dataset, const NormalizationMap& normalization) {
  std::optional<std::size_t> revenue;
  for (const auto& v : dataset.variables()) {
    if (normalization.of(v.code) != Normalization::revenue) continue;
    revenue = dataset.variable_index(normalization.revenue_code);
    if (!revenue) {
      throw ConfigError(fmt::format("variable '{}' is revenue-normalized but the dataset has no '{}'",
                                    v.code, normalization.revenue_code));
    }
  }

  RatePanel panel;
  panel.entities_ = dataset.entities();
  panel.variables_ = dataset.variables();
  panel.series_.reserve(dataset.entities().size() * dataset.variables().size());
  for (std::size_t e = 0; e < dataset.entities().size(); ++e) {
    for (std::size_t v = 0; v < dataset.variables().size(); ++v) {
      const auto& series = dataset.series(e, v);
      auto rates = normalization.of(series.variable().code) == Normalization::revenue
                       ? revenue_denominator_rate(series, dataset.series(e, *revenue))
                       : own_denominator_rate(series);
      const std::size_t present = rates.present_count();
      panel.diagnostics_.rate_points += rates.rates().size();
      panel.diagnostics_.missing_points += rates.rates().size() - present;
      panel.diagnostics_.negative_denominators += rates.negative_denominators();
      panel.series_.push_back(std::move(rates));
    }
  }
  return panel;
}

void write_rate_csv(const RatePanel& panel, std::ostream& out) {
  out << "entity,year,variable,rate\n";
  for (std::size_t e = 0; e < panel.entities().size(); ++e) {
    const std::string entity = detail::quote_csv(panel.entities()[e]);
    for (std::size_t v = 0; v < panel.variables().size(); ++v) {
      const auto& series = panel.get(e, v);
      for (int year = series.first_year(); year <= series.last_year(); ++year) {
        out << entity << ',' << year << ',' << detail::quote_csv(series.variable().code) << ',';
        if (auto r = series.at(year)) out << fmt::format("{}", *r);
        out << '\n';
      }
    }
  }
}

}  // namespace vcnet
