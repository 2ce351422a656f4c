#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mic/glm.hpp"
#include "mic/mic.hpp"
#include "mic/optimize.hpp"

namespace mic {

enum class SimModel { A, B, C };
enum class Method { MIC, BSS, Oracle, Full };

std::string_view model_name(SimModel m);
SimModel parse_model(std::string_view s);
std::string_view method_name(Method m);
Method parse_method(std::string_view s);
Family model_family(SimModel m);

struct SimDesign {
  SimModel model = SimModel::A;
  int n = 200;
  int p = 12;
  Vector beta0;  // empty: model default
  double rho = 0.5;
  int reps = 100;
  int test_n = 500;
  double alpha = 0.05;
  std::vector<Method> methods{Method::MIC, Method::Oracle};
  std::uint64_t seed = 1;
  MicConfig mic;  // seed is overridden per replication
  int threads = 1;
};

// Coefficients (3, 1.5, 0, 0, 2, 0...) for A/B and (1.2, 0.6, 0, 0, 0.8, 0...) for C.
Vector default_beta0(SimModel m, int p);
// Fills defaults and throws InvalidInput on an inconsistent design.
SimDesign resolved(SimDesign d);
Support true_support(const SimDesign& d);
Matrix ar_covariance(int p, double rho);

// Rows i.i.d. N(0, Sigma) with Sigma_jk = rho^|j-k|; Model B dichotomizes
// columns 1, 3, ..., 11 (1-based) as I(x < 0).
Matrix gen_covariates(const SimDesign& d, int rows, Rng& rng);
// Poisson rows whose mean exceeds 1e6 are redrawn (X is updated in place).
Vector gen_response(const SimDesign& d, Matrix& X, Rng& rng, long* redraws = nullptr);
// Mean squared difference of mean responses on a test design.
double model_error(const Vector& beta_hat, const Matrix& test_X, const SimDesign& d);

struct RepOutcome {
  int rep = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  double me = 0.0;
  int size = 0;
  int fp = 0;
  int fn = 0;
  bool correct = false;
  Vector beta_hat;
  std::vector<double> se_nonzero;  // per true-nonzero coefficient, NaN if unselected
  Vector p_values;                 // MIC only: Wald p-values on gamma
};

struct SeCalibration {
  int index = 0;
  double mad_estimates = 0.0;
  double median_se = 0.0;
  double mad_se = 0.0;
};

struct MethodSummary {
  Method method = Method::MIC;
  double me_mean = 0.0;
  double size_mean = 0.0;
  double fp_mean = 0.0;
  double fn_mean = 0.0;
  double c_rate = 0.0;
  int reps_completed = 0;
  int reps_failed = 0;
  std::vector<std::uint64_t> failed_seeds;
  std::vector<double> rejection_rate;  // MIC only: per coefficient, p <= alpha
  std::vector<SeCalibration> se_calibration;
  std::vector<RepOutcome> reps;
};

struct SimReport {
  SimDesign design;
  std::vector<MethodSummary> methods;
  long poisson_redraws = 0;

  const MethodSummary& summary(Method m) const;
};

SimReport run_simulation(const SimDesign& design);

struct SizePower {
  std::vector<double> rejection_rate;  // per coefficient
  std::vector<int> zero_indices;
  std::vector<int> nonzero_indices;
};
SizePower size_power_study(const SimDesign& design);

struct ARobustnessPoint {
  double a = 0.0;
  Support support;
  Vector beta_tilde;
  Vector gamma_tilde;
  bool flagged = false;  // a outside the recommended [10, 50]
};

struct ARobustness {
  std::vector<ARobustnessPoint> points;
  Support modal_support;
  double stability = 0.0;  // fraction of grid points selecting the modal support
};

std::vector<double> default_a_grid();  // {1, 5, 10, ..., 100}
ARobustness a_robustness_study(const Dataset& d, const std::vector<double>& a_grid, const MicConfig& base);

// Scaled median absolute deviation (1.4826 * median |x - median|).
double mad(std::vector<double> values);
double median(std::vector<double> values);

}  // namespace mic
