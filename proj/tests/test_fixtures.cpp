// Heart and fish checks. The CSVs are not redistributed here; point
// MIC_FIXTURE_DIR at a directory holding heart.csv and fish.csv to run them.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "mic/csv.hpp"
#include "mic/mic.hpp"

using namespace mic;

namespace {

std::string fixture(const char* name) {
  const char* dir = std::getenv("MIC_FIXTURE_DIR");
  if (dir == nullptr) return {};
  const std::string path = std::string(dir) + "/" + name;
  return std::filesystem::exists(path) ? path : std::string{};
}

std::vector<std::string> support_names(const Dataset& d, const MicFit& fit) {
  std::vector<std::string> out;
  for (int j : fit.support) out.push_back(d.column_names[static_cast<size_t>(j)]);
  return out;
}

}  // namespace

TEST_CASE("heart: logistic MIC support and intercept") {
  const std::string path = fixture("heart.csv");
  if (path.empty()) {
    MESSAGE("heart.csv not available, skipped");
    return;
  }
  IngestOptions o;
  o.response = "chd";
  o.family = Family::BernoulliLogit;
  o.add_intercept = true;
  CsvTable t = read_csv(path);
  o.predictors = {"sbp", "tobacco", "ldl", "adiposity", "famhist", "typea", "obesity", "alcohol", "age"};
  const Dataset d = ingest(t, o);
  MicConfig cfg;
  cfg.seed = 1;
  const MicFit fit = solve_mic(d, cfg);
  CHECK(support_names(d, fit) == std::vector<std::string>{"intercept", "tobacco", "ldl", "famhist", "age"});
  CHECK(fit.beta_tilde[0] == doctest::Approx(-0.845).epsilon(0.05));
}

TEST_CASE("fish: poisson MIC support with interaction") {
  const std::string path = fixture("fish.csv");
  if (path.empty()) {
    MESSAGE("fish.csv not available, skipped");
    return;
  }
  IngestOptions o;
  o.response = "count";
  o.family = Family::PoissonLog;
  o.add_intercept = true;
  o.interactions = {"xb:zg"};
  const Dataset d = ingest(read_csv(path), o);
  MicConfig cfg;
  cfg.seed = 1;
  const MicFit fit = solve_mic(d, cfg);
  CHECK(support_names(d, fit) == std::vector<std::string>{"intercept", "child", "xb", "zg"});
}
