#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "diabetes.hpp"
#include "mic/csv.hpp"
#include "mic/report.hpp"

using namespace mic;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace

TEST_CASE("quoted fields, BOM and CRLF") {
  const CsvTable t = parse("\xEF\xBB\xBF" "a,\"b,c\",d\r\n1,\"x \"\"q\"\"\",3\r\n\r\n");
  CHECK(t.header == std::vector<std::string>{"a", "b,c", "d"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][1] == "x \"q\"");
  CHECK(t.column_index("d") == 2);
  CHECK(t.column_index("zz") == -1);
}

TEST_CASE("malformed CSV names the row and column") {
  try {
    parse("a,b\n1,2\n3\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 3);
  }
  IngestOptions o;
  o.response = "y";
  try {
    ingest(parse("x,y\n1,2\n2,3\nabc,4\n5,1\n"), o);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 4);
    CHECK(e.column() == "x");
    CHECK(std::string(e.what()).find("row 4") != std::string::npos);
  }
  o.response = "nope";
  CHECK_THROWS_AS(ingest(parse("x,y\n1,2\n"), o), CsvError);
  CHECK_THROWS_AS(parse(""), CsvError);
  CHECK_THROWS_AS(parse("a,b\n\"1,2\n"), CsvError);
}

TEST_CASE("two-label columns are coded in label order") {
  IngestOptions o;
  o.response = "y";
  o.standardize = false;
  const Dataset d = ingest(parse("g,x,y\nPresent,1,3\nAbsent,2,1\nPresent,3,2\nAbsent,5,7\n"), o);
  CHECK(d.X(0, 0) == 1.0);
  CHECK(d.X(1, 0) == 0.0);
  CHECK(d.column_names == std::vector<std::string>{"g", "x"});
}

TEST_CASE("interactions are products of raw columns") {
  IngestOptions o;
  o.response = "y";
  o.predictors = {"a", "b"};
  o.interactions = {"a:b"};
  o.standardize = false;
  o.add_intercept = true;
  const Dataset d = ingest(parse("a,b,y\n1,2,0\n3,4,1\n-1,5,2\n2,2,1\n"), o);
  CHECK(d.column_names == std::vector<std::string>{"intercept", "a", "b", "a:b"});
  CHECK(d.X(1, 3) == 12.0);
  CHECK(d.X(2, 3) == -5.0);
}

TEST_CASE("numbers survive a CSV round trip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  CsvTable t;
  t.header = {"v", "label"};
  std::vector<double> vals;
  for (int i = 0; i < 500; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 21) - 10);
    vals.push_back(v);
    t.rows.push_back({format_number(v), "a,\"b\""});
  }
  std::ostringstream os;
  write_csv(os, t);
  const CsvTable back = parse(os.str());
  for (size_t i = 0; i < vals.size(); ++i) {
    CHECK(std::stod(back.rows[i][0]) == vals[i]);
    CHECK(back.rows[i][1] == "a,\"b\"");
  }
}

TEST_CASE("atomic writes leave no temp file") {
  const auto dir = std::filesystem::temp_directory_path() / "mic_report_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_file_atomic(path, "{\"x\": 1}\n");
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS(write_file_atomic((dir / "missing" / "out.json").string(), "x"));
  CHECK_FALSE(std::filesystem::exists(dir / "missing" / "out.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep csv has one row per coefficient and grid point") {
  const Dataset d = mic::testing::diabetes();
  ARobustness r;
  for (double a : {10.0, 20.0}) r.points.push_back({a, {}, Vector::Zero(d.p()), Vector::Zero(d.p()), false});
  const CsvTable t = parse(sweep_csv(d, r));
  CHECK(t.header == std::vector<std::string>{"coefficient", "a", "gamma", "beta"});
  CHECK(t.rows.size() == static_cast<size_t>(2 * d.p()));
}

TEST_CASE("diabetes fixture shape") {
  const Dataset d = mic::testing::diabetes();
  CHECK(d.n() == 442);
  CHECK(d.p() == 10);
  CHECK(std::abs(d.y.mean()) < 1e-10);
  CHECK(std::abs(d.y.squaredNorm() / 441.0 - 1.0) < 1e-10);
}
