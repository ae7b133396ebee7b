#include <doctest.h>

#include <random>
#include <sstream>

#include "vcnet/error.hpp"
#include "vcnet/transforms.hpp"

using namespace vcnet;

namespace {

PanelSeries series_of(const std::string& entity, const std::string& code, int t_i,
                      std::vector<std::optional<double>> values) {
  PanelSeries s(entity, {code, default_label(code)}, t_i, t_i + static_cast<int>(values.size()) - 1);
  for (std::size_t k = 0; k < values.size(); ++k) s.set(t_i + static_cast<int>(k), values[k]);
  return s;
}

}  // namespace

TEST_CASE("own_denominator_rate examples") {
  const auto r = own_denominator_rate(series_of("A", "r", 2000, {100.0, 110.0, 99.0}));
  CHECK(r.first_year() == 2000);
  CHECK(r.last_year() == 2001);
  CHECK(*r.at(2000) == doctest::Approx(0.10).epsilon(1e-15));
  CHECK(*r.at(2001) == doctest::Approx(-0.10).epsilon(1e-15));

  const auto flat = own_denominator_rate(series_of("A", "m", 2000, {50.0, 50.0, 50.0, 50.0, 50.0}));
  for (const auto& v : flat.rates()) CHECK(*v == 0.0);

  const auto zero = own_denominator_rate(series_of("A", "o", 2000, {0.0, 5.0}));
  CHECK_FALSE(zero.at(2000).has_value());
}

TEST_CASE("revenue_denominator_rate examples") {
  const auto revenue = series_of("A", "r", 2000, {100.0, 120.0});
  const auto rate = revenue_denominator_rate(series_of("A", "i", 2000, {-10.0, 5.0}), revenue);
  CHECK(*rate.at(2000) == doctest::Approx(0.15).epsilon(1e-15));

  const auto flat = revenue_denominator_rate(series_of("A", "p", 2000, {7.0, 7.0, 7.0}),
                                             series_of("A", "r", 2000, {3.0, 9.0, 1.0}));
  for (const auto& v : flat.rates()) CHECK(*v == 0.0);

  const auto zero = revenue_denominator_rate(series_of("A", "i", 2000, {1.0, 2.0}),
                                             series_of("A", "r", 2000, {0.0, 2.0}));
  CHECK_FALSE(zero.at(2000).has_value());

  CHECK_THROWS_AS(revenue_denominator_rate(series_of("A", "i", 2000, {1.0, 2.0}),
                                           series_of("B", "r", 2000, {1.0, 2.0})),
                  UsageError);
  CHECK_THROWS_AS(revenue_denominator_rate(series_of("A", "i", 2000, {1.0, 2.0}),
                                           series_of("A", "r", 2001, {1.0, 2.0})),
                  UsageError);
}

TEST_CASE("no rate is fabricated across a gap") {
  const auto r = own_denominator_rate(series_of("A", "m", 2000, {1.0, std::nullopt, 3.0, 4.0}));
  CHECK_FALSE(r.at(2000).has_value());
  CHECK_FALSE(r.at(2001).has_value());
  CHECK(*r.at(2002) == doctest::Approx(1.0 / 3.0));
  CHECK(r.present_count() == 1);
}

TEST_CASE("negative own denominators are kept and counted") {
  const auto r = own_denominator_rate(series_of("A", "o", 2000, {-10.0, -12.0, 4.0}));
  CHECK(*r.at(2000) == doctest::Approx(0.2));
  CHECK(*r.at(2001) == doctest::Approx(16.0 / -12.0));
  CHECK(r.negative_denominators() == 2);
}

TEST_CASE("build_rate_panel on a hand-computed four-year toy") {
  std::istringstream in(
      "entity,year,r,i,p,o,m\n"
      "A,2000,100,10,20,50,200\n"
      "A,2001,120,-5,25,55,150\n"
      "A,2002,90,4,10,-10,300\n"
      "A,2003,99,4,18,-12,330\n");
  const auto ds = read_csv(in);
  const auto panel = build_rate_panel(ds);
  CHECK(panel.entities().size() == 1);
  CHECK(panel.variables().size() == 5);

  struct Expect {
    const char* code;
    double rates[3];
  };
  const Expect expected[] = {
      {"r", {0.2, -0.25, 0.1}},
      {"i", {-15.0 / 100.0, 9.0 / 120.0, 0.0}},
      {"p", {5.0 / 100.0, -15.0 / 120.0, 8.0 / 90.0}},
      {"o", {5.0 / 50.0, -65.0 / 55.0, -2.0 / -10.0}},
      {"m", {-0.25, 1.0, 0.1}},
  };
  for (const auto& e : expected) {
    const auto& s = panel.get("A", e.code);
    REQUIRE(s.rates().size() == 3);
    for (int k = 0; k < 3; ++k) {
      CAPTURE(e.code);
      CAPTURE(k);
      CHECK(*s.at(2000 + k) == doctest::Approx(e.rates[k]).epsilon(1e-14));
    }
  }
  CHECK(panel.diagnostics().negative_denominators == 1);
  CHECK(panel.diagnostics().rate_points == 15);
  CHECK(panel.diagnostics().missing_points == 0);
}

TEST_CASE("build_rate_panel dispatch is configurable and checks for revenue") {
  std::istringstream in("entity,year,i,m\nA,2000,1,2\nA,2001,2,4\n");
  const auto ds = read_csv(in);
  CHECK_THROWS_AS(build_rate_panel(ds), ConfigError);

  NormalizationMap own_only;
  const auto panel = build_rate_panel(ds, own_only);
  CHECK(*panel.get("A", "i").at(2000) == 1.0);

  NormalizationMap by_m;
  by_m.by_code["i"] = Normalization::revenue;
  by_m.revenue_code = "m";
  CHECK(*build_rate_panel(ds, by_m).get("A", "i").at(2000) == 0.5);
}

TEST_CASE("rate scaling properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> level(1.0, 1000.0);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::optional<double>> x(8);
    std::vector<std::optional<double>> r(8);
    for (auto& v : x) v = level(rng);
    for (auto& v : r) v = level(rng);
    const double k = factor(rng);
    std::vector<std::optional<double>> xk(x);
    std::vector<std::optional<double>> rk(r);
    for (auto& v : xk) *v *= k;
    for (auto& v : rk) *v *= k;

    const auto base = own_denominator_rate(series_of("A", "m", 2000, x));
    const auto scaled = own_denominator_rate(series_of("A", "m", 2000, xk));
    for (int t = 2000; t < 2007; ++t) CHECK(*scaled.at(t) == doctest::Approx(*base.at(t)).epsilon(1e-12));

    const auto rev = revenue_denominator_rate(series_of("A", "i", 2000, x), series_of("A", "r", 2000, r));
    const auto rev_k = revenue_denominator_rate(series_of("A", "i", 2000, x), series_of("A", "r", 2000, rk));
    for (int t = 2000; t < 2007; ++t) CHECK(*rev_k.at(t) == doctest::Approx(*rev.at(t) / k).epsilon(1e-12));
  }
}

TEST_CASE("write_rate_csv lists every rate year") {
  std::istringstream in("entity,year,r,m\nA,2000,100,10\nA,2001,110,\nA,2002,121,12\n");
  const auto panel = build_rate_panel(read_csv(in));
  std::ostringstream out;
  write_rate_csv(panel, out);
  CHECK(out.str() ==
        "entity,year,variable,rate\n"
        "A,2000,r,0.1\n"
        "A,2001,r,0.1\n"
        "A,2000,m,\n"
        "A,2001,m,\n");
}
