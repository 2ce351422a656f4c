#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mic/report.hpp"

namespace mic {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBadCsv = 2,
  kExitFitFailed = 3,
  kExitBadDesign = 4,
};

struct RunConfig {
  std::string command;  // fit | simulate | sweep-a | best-subset
  std::string input_path;
  std::string response_column;
  std::string family = "gaussian";
  std::vector<std::string> predictors;
  std::vector<std::string> interactions;
  std::optional<bool> intercept;  // unset: on for binomial/poisson
  bool raw_response = false;
  std::vector<std::string> methods;  // fit: full,bss,mic; simulate: MIC,BSS,Oracle,Full
  double a = 10.0;
  std::string lambda0 = "bic";  // bic | aic | <number>
  bool penalize_intercept = true;
  bool refit = false;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_path;  // empty: stdout
  std::string format = "json";
  // simulate
  std::string model = "A";
  int n = 200;
  int p = 12;
  int reps = 100;
  int test_n = 500;
  std::string design_config;  // optional JSON file
  bool include_reps = false;
  // sweep-a
  std::vector<double> a_grid;
  std::string trajectory_csv;
  // best-subset
  int max_p = 20;
};

// Parses lambda0 ("bic" -> unset, "aic" -> 2, or a number).
std::optional<double> parse_lambda0(const std::string& s);

// Each returns an exit code; reports go to the output file (or `out`).
int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep_a(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_best_subset(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Applies a JSON design file to a SimDesign (keys mirror the flags).
SimDesign design_from_json(const json& j, SimDesign base);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mic
