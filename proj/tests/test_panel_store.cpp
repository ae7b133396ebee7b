#include <doctest.h>

#include <random>
#include <sstream>

#include "vcnet/error.hpp"
#include "vcnet/panel_store.hpp"

using namespace vcnet;

namespace {

Dataset parse(const std::string& text, const CsvSchema& schema = {}) {
  std::istringstream in(text);
  return read_csv(in, schema);
}

/// Six years 2000-2005 for one entity, all five variables present.
std::string toy_six_years() {
  return "entity,year,r,i,p,o,m\n"
         "A,2000,100,10,20,50,200\n"
         "A,2001,110,12,22,52,210\n"
         "A,2002,120,9,25,55,190\n"
         "A,2003,115,14,21,57,230\n"
         "A,2004,130,11,26,60,250\n"
         "A,2005,140,15,30,62,260\n";
}

}  // namespace

TEST_CASE("load: one entity, three years, five variables") {
  const auto ds = parse(
      "entity,year,r,i,p,o,m\n"
      "A,2000,100,10,20,50,200\n"
      "A,2001,110,11,21,51,201\n"
      "A,2002,120,12,22,52,202\n");
  CHECK(ds.entities() == std::vector<std::string>{"A"});
  REQUIRE(ds.variables().size() == 5);
  CHECK(ds.variables()[0] == VariableId{"r", "revenue"});
  CHECK(ds.variables()[4] == VariableId{"m", "market capitalization"});
  CHECK(ds.period_start() == 2000);
  CHECK(ds.period_end() == 2002);
  for (std::size_t v = 0; v < 5; ++v) {
    const auto& s = ds.series(0, v);
    CHECK(s.size() == 3);
    for (int y = 2000; y <= 2002; ++y) CHECK(s.at(y).has_value());
  }
  CHECK(*ds.series("A", "p").at(2001) == 21.0);
}

TEST_CASE("load: missing cell stays missing, never zero") {
  const auto ds = parse(
      "entity,year,r,i,p,o,m\n"
      "A,2000,100,10,20,50,200\n"
      "A,2001,,11,21,51,201\n"
      "A,2002,120,n/a,22,52,202\n");
  CHECK_FALSE(ds.series("A", "r").at(2001).has_value());
  CHECK_FALSE(ds.series("A", "i").at(2002).has_value());
  CHECK(*ds.series("A", "r").at(2002) == 120.0);
}

TEST_CASE("load: years without a row are missing for every variable") {
  const auto ds = parse(
      "entity,year,x\n"
      "A,2000,1\n"
      "A,2003,2\n"
      "B,2001,3\n");
  CHECK(ds.period_start() == 2000);
  CHECK(ds.period_end() == 2003);
  CHECK_FALSE(ds.series("A", "x").at(2001).has_value());
  CHECK_FALSE(ds.series("B", "x").at(2000).has_value());
  CHECK(*ds.series("B", "x").at(2001) == 3.0);
}

TEST_CASE("load: duplicate (entity, year) cites both rows") {
  const std::string text =
      "entity,year,r\n"
      "A,2000,1\n"
      "A,2001,2\n"
      "A,2001,3\n";
  try {
    parse(text);
    FAIL("expected DuplicateKeyError");
  } catch (const DuplicateKeyError& e) {
    CHECK(e.first_row() == 3);
    CHECK(e.second_row() == 4);
    CHECK(std::string(e.what()).find("rows 3 and 4") != std::string::npos);
  }
}

TEST_CASE("load: schema errors name the column") {
  CsvSchema schema;
  schema.variables = default_variables();
  try {
    parse("entity,year,r,i,p,o\nA,2000,1,2,3,4\n", schema);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("'m'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("firm,year,r\nA,2000,1\n"), SchemaError);
  CHECK_THROWS_AS(parse("entity,year,r,r\nA,2000,1,2\n"), SchemaError);
  CHECK_THROWS_AS(parse(""), SchemaError);
  CHECK_THROWS_AS(parse("entity,year,r\n"), SchemaError);
  CHECK_THROWS_AS(parse("entity,year,r\nA,2000\n"), SchemaError);
  CHECK_THROWS_AS(parse("entity,year,r\nA,20x0,1\n"), SchemaError);
}

TEST_CASE("load: custom column names and declared window") {
  CsvSchema schema;
  schema.entity_column = "firm";
  schema.year_column = "fy";
  schema.variables = {{"r", "sales"}};
  schema.columns["r"] = "Revenue";
  schema.window = std::pair{1999, 2002};
  const auto ds = parse("fy,firm,Revenue,junk\n2000,X,5,zz\n2001,X,6,zz\n", schema);
  CHECK(ds.period_start() == 1999);
  CHECK(ds.period_end() == 2002);
  CHECK(ds.variables().front().label == "sales");
  CHECK(*ds.series("X", "r").at(2001) == 6.0);
  CHECK_FALSE(ds.series("X", "r").at(1999).has_value());

  schema.window = std::pair{2000, 2001};
  CHECK_THROWS_AS(parse("fy,firm,Revenue\n2000,X,5\n2002,X,6\n", schema), SchemaError);
}

TEST_CASE("load: quoted entity names survive") {
  const auto ds = parse("entity,year,x\n\"Acme, Inc.\",2000,1\n\"Acme, Inc.\",2001,2\n");
  CHECK(ds.entities().front() == "Acme, Inc.");
}

TEST_CASE("round trip: write then read reproduces the dataset, missing markers included") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  std::bernoulli_distribution missing(0.15);
  for (int trial = 0; trial < 40; ++trial) {
    const int t_i = 1990 + trial % 5;
    const int t_f = t_i + 2 + trial % 7;
    Dataset ds(default_variables(), t_i, t_f);
    const int n_entities = 1 + trial % 4;
    for (int e = 0; e < n_entities; ++e) {
      const auto idx = ds.add_entity(e == 2 ? "Quote \"Co\", Ltd" : "E" + std::to_string(e));
      for (std::size_t v = 0; v < 5; ++v) {
        for (int y = t_i; y <= t_f; ++y) {
          if (!missing(rng)) ds.series(idx, v).set(y, value(rng));
        }
      }
      // Keep the window observable so the reloaded window matches.
      ds.series(idx, 0).set(t_i, 1.0);
      ds.series(idx, 0).set(t_f, 2.0);
    }
    std::stringstream buf;
    write_csv(ds, buf);
    const auto back = read_csv(buf);
    CHECK(back == ds);
  }
}

TEST_CASE("complete_window: full coverage yields every rate year") {
  Dataset ds(default_variables(), 1990, 2018);
  const auto e = ds.add_entity("A");
  for (std::size_t v = 0; v < 5; ++v) {
    for (int y = 1990; y <= 2018; ++y) ds.series(e, v).set(y, 100.0 + y - 1990 + static_cast<double>(v));
  }
  const auto years = complete_window(ds, "A", {"i", "m"});
  REQUIRE(years.has_value());
  CHECK(years->size() == 28);
  CHECK(years->front() == 1990);
  CHECK(years->back() == 2017);
}

TEST_CASE("complete_window: six-year toy with a hole in net income") {
  // Enumerated by hand: rates need both variables (and revenue for i, p) at
  // every year 2000-2005; the hole at 2005 removes A from pairs touching i and
  // leaves the others at 2000-2004.
  auto ds = parse(toy_six_years());
  const auto e = *ds.entity_index("A");
  ds.series(e, *ds.variable_index("i")).set(2005, std::nullopt);

  CHECK_FALSE(complete_window(ds, "A", {"i", "m"}).has_value());
  CHECK_FALSE(complete_window(ds, "A", {"r", "i"}).has_value());
  const auto om = complete_window(ds, "A", {"o", "m"});
  REQUIRE(om.has_value());
  CHECK(*om == std::vector<int>{2000, 2001, 2002, 2003, 2004});
  CHECK(complete_window(ds, "A", {"p", "m"}).has_value());

  // p is revenue-normalized, so a revenue hole removes (p, m) but not (o, m).
  ds.series(e, *ds.variable_index("r")).set(2002, std::nullopt);
  CHECK_FALSE(complete_window(ds, "A", {"p", "m"}).has_value());
  CHECK(complete_window(ds, "A", {"o", "m"}).has_value());
}

TEST_CASE("complete_window: too few rate points, zero denominators, lookups") {
  const auto three = parse(
      "entity,year,r,m\n"
      "A,2000,1,1\n"
      "A,2001,2,2\n"
      "A,2002,3,3\n");
  CHECK_FALSE(complete_window(three, "A", {"r", "m"}).has_value());
  CHECK(complete_window(three, "A", {"r", "m"}, NormalizationMap::defaults(), 2).has_value());

  auto ds = parse(toy_six_years());
  CHECK(complete_window(ds, "A", {"o", "m"}).has_value());
  ds.series(0, *ds.variable_index("m")).set(2003, 0.0);
  CHECK_FALSE(complete_window(ds, "A", {"o", "m"}).has_value());
  // Zero in the last year is a numerator only.
  ds.series(0, *ds.variable_index("m")).set(2003, 230.0);
  ds.series(0, *ds.variable_index("m")).set(2005, 0.0);
  CHECK(complete_window(ds, "A", {"o", "m"}).has_value());

  CHECK_THROWS_AS(complete_window(ds, "Z", {"o", "m"}), LookupError);
  CHECK_THROWS_AS(complete_window(ds, "A", {"o", "q"}), LookupError);

  const auto no_revenue = parse("entity,year,i,m\nA,2000,1,1\nA,2001,1,1\n");
  CHECK_THROWS_AS(complete_window(no_revenue, "A", {"i", "m"}), ConfigError);
}

TEST_CASE("complete_window property: returned years are in range and fully observed") {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution missing(0.03);
  std::uniform_real_distribution<double> value(1.0, 100.0);
  const auto vars = default_variables();
  const auto norm = NormalizationMap::defaults();
  for (int trial = 0; trial < 200; ++trial) {
    Dataset ds(vars, 2000, 2000 + 4 + trial % 10);
    ds.add_entity("A");
    for (std::size_t v = 0; v < 5; ++v) {
      for (int y = ds.period_start(); y <= ds.period_end(); ++y) {
        if (!missing(rng)) ds.series(0, v).set(y, value(rng));
      }
    }
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) {
        if (a == b) continue;
        const auto years = complete_window(ds, "A", {vars[a].code, vars[b].code});
        if (!years) continue;
        CHECK(years->size() >= kMinRatePoints);
        for (int t : *years) {
          CHECK(t >= ds.period_start());
          CHECK(t <= ds.period_end() - 1);
          for (std::size_t v : {a, b}) {
            CHECK(ds.series(0, v).at(t).has_value());
            CHECK(ds.series(0, v).at(t + 1).has_value());
            if (norm.of(vars[v].code) == Normalization::revenue) {
              CHECK(ds.series(0, 0).at(t).has_value());
            }
          }
        }
      }
    }
  }
}
