#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <vector>

#include "cli_app.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "vcnet");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = vcnet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

const char* kSpec =
    "n_entities = 40\n"
    "variables = r, i, p, o, m\n"
    "coupling = i -> m : 0.7\n"
    "seed = 8\n";

}  // namespace

TEST_CASE("simulate then analyze writes every output") {
  TempDir dir;
  write_file(dir.file("spec.cfg"), kSpec);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("panel.csv")}) == 0);

  std::string log;
  REQUIRE(invoke({"analyze", "--input", dir.file("panel.csv"), "--outdir", dir.file("out"),
                  "--dump-rates", "--threads", "2"},
                 &log) == 0);
  for (const char* name : {"correlation_table.tsv", "correlation_table.txt", "directionality_table.tsv",
                           "directionality_table.txt", "entity_detail.tsv", "network.json",
                           "correlation_network.dot", "directed_network.dot", "rates.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir.path() / "out" / name));
  }
  CHECK(log.find("40 entities, 5 variables") != std::string::npos);
  CHECK(log.find("wrote 9 file(s)") != std::string::npos);

  const auto table = read_file(dir.file("out/directionality_table.tsv"));
  CHECK(std::count(table.begin(), table.end(), '\n') == 11);
}

TEST_CASE("simulate is byte-reproducible and honours --seed") {
  TempDir dir;
  write_file(dir.file("spec.cfg"), kSpec);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("a.csv")}) == 0);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("b.csv")}) == 0);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("c.csv"), "--seed", "9"}) == 0);
  CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
  CHECK(read_file(dir.file("a.csv")) != read_file(dir.file("c.csv")));
}

TEST_CASE("analyze honours --pairs, --formats and a schema file") {
  TempDir dir;
  write_file(dir.file("panel.csv"),
             "firm,fy,sales,mcap\n"
             "A,2000,100,10\nA,2001,110,12\nA,2002,99,11\nA,2003,120,15\nA,2004,118,14\nA,2005,130,13\n"
             "B,2000,50,5\nB,2001,55,4\nB,2002,60,6\nB,2003,52,7\nB,2004,58,6\nB,2005,61,8\n");
  write_file(dir.file("schema.cfg"),
             "entity_column = firm\n"
             "year_column = fy\n"
             "variables = r, m\n"
             "columns = r:sales, m:mcap\n"
             "labels = r:Sales, m:Market cap\n");
  REQUIRE(invoke({"analyze", "--input", dir.file("panel.csv"), "--schema", dir.file("schema.cfg"),
                  "--outdir", dir.file("out"), "--formats", "tsv", "--pairs", "m:r"}) == 0);
  CHECK_FALSE(fs::exists(dir.path() / "out" / "correlation_table.txt"));
  const auto table = read_file(dir.file("out/correlation_table.tsv"));
  CHECK(table.find("[Market cap(m), Sales(r)]") != std::string::npos);
  CHECK(table.find("\t2\n") != std::string::npos);
}

TEST_CASE("hist writes a density and rejects bad requests") {
  TempDir dir;
  write_file(dir.file("spec.cfg"), kSpec);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("panel.csv")}) == 0);

  std::string out;
  REQUIRE(invoke({"hist", "--input", dir.file("panel.csv"), "--pair", "i,m", "--statistic", "pearson",
                  "--bins", "20"},
                 &out) == 0);
  CHECK(out.starts_with("# statistic pearson\n# pair i,m\n"));
  CHECK(out.find("# bins 20\n") != std::string::npos);

  std::string err;
  CHECK(invoke({"hist", "--input", dir.file("panel.csv"), "--pair", "i,q"}, nullptr, &err) == 1);
  CHECK(err.find("unknown variable 'q'") != std::string::npos);

  write_file(dir.file("sparse.csv"), "entity,year,x,y\nA,2000,1,1\nA,2001,2,2\n");
  CHECK(invoke({"hist", "--input", dir.file("sparse.csv"), "--pair", "x,y"}, nullptr, &err) == 1);
  CHECK(err.starts_with("error: "));
}

TEST_CASE("errors exit nonzero without leaving partial outputs") {
  TempDir dir;
  write_file(dir.file("cyclic.cfg"), "variables = x, y\ncoupling = x -> y : 0.5, y -> x : 0.5\n");
  std::string err;
  CHECK(invoke({"simulate", "--spec", dir.file("cyclic.cfg"), "--output", dir.file("c.csv")}, nullptr, &err) == 1);
  CHECK(err.find("cycle") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path() / "c.csv"));

  write_file(dir.file("spec.cfg"), kSpec);
  REQUIRE(invoke({"simulate", "--spec", dir.file("spec.cfg"), "--output", dir.file("panel.csv")}) == 0);
  // A directory squatting on one output name makes the last write fail.
  fs::create_directories(dir.path() / "out" / "directed_network.dot");
  CHECK(invoke({"analyze", "--input", dir.file("panel.csv"), "--outdir", dir.file("out")}, nullptr, &err) == 1);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir.path() / "out")) files += entry.is_regular_file();
  CHECK(files == 0);

  CHECK(invoke({"analyze", "--input", dir.file("panel.csv"), "--outdir", dir.file("o2"), "--alpha", "1.5"}) != 0);
  CHECK(invoke({"analyze", "--input", dir.file("panel.csv"), "--outdir", dir.file("o3"), "--pairs", "i:i"}) == 1);
  CHECK(invoke({"analyze", "--input", dir.file("missing.csv"), "--outdir", dir.file("o4")}) != 0);
  CHECK(invoke({}) != 0);
}
