#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Support = std::vector<int>;  // sorted column indices

enum class Family { GaussianIdentity, BernoulliLogit, PoissonLog };

std::string_view family_name(Family f);
// Accepts "gaussian", "binomial"/"bernoulli"/"logistic", "poisson".
Family parse_family(std::string_view name);

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Design matrix, response and family. Immutable once built.
struct Dataset {
  Matrix X;
  Vector y;
  Family family = Family::GaussianIdentity;
  bool has_intercept = false;  // if set, column 0 is all ones
  bool standardized = false;
  std::vector<std::string> column_names;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
};

struct DatasetOptions {
  bool standardize = true;
  bool add_intercept = false;
  // Gaussian only: center and scale y to unit sample variance.
  bool standardize_response = false;
};

// Validates, optionally standardizes columns (mean 0, sample sd 1), and
// prepends an unstandardized all-ones intercept column named "intercept".
Dataset make_dataset(Matrix X, Vector y, Family family,
                     std::vector<std::string> column_names = {},
                     const DatasetOptions& opts = {});

// Throws InvalidInput describing the first violated invariant.
void validate(const Dataset& d);

// Stacks a dataset on itself `times` times (used for information-additivity checks).
Dataset replicate_rows(const Dataset& d, int times);

// Linear predictors are clamped to this magnitude inside Bernoulli/Poisson
// mean and likelihood evaluation.
inline constexpr double kEtaClamp = 30.0;

// Number of linear-predictor entries clamped so far (process-wide).
std::uint64_t clamped_evaluations();

// L(beta). Gaussian uses the profile form with sigma^2 = RSS/n:
//   -2L = n ln(RSS/n) + n(1 + ln 2pi).
double log_likelihood(const Dataset& d, const Vector& beta);
Vector score(const Dataset& d, const Vector& beta);
// Observed information -d2L/dbeta2, summed over observations.
Matrix neg_hessian(const Dataset& d, const Vector& beta);

// Mean function of the canonical link.
double mean_of_eta(Family f, double eta);

struct MleFit {
  Vector beta_hat;
  double loglik = 0.0;
  Vector score_at_solution;
  Matrix neg_hessian;
  bool converged = false;
  int iterations = 0;
  Support support;
};

struct IrlsOptions {
  double tolerance = 1e-8;  // on ||score||_inf
  int max_iter = 100;
};

// Maximum likelihood restricted to `support` (zeros elsewhere). Gaussian fits
// use a QR least-squares solve; the others Newton/IRLS with step halving.
// Throws SingularDesign when the support submatrix is rank deficient.
MleFit fit_mle(const Dataset& d, const Support& support, const IrlsOptions& opts = {},
               const Vector* warm_start = nullptr);

Support full_support(int p);

// -2 loglik + lambda0 * k
double information_criterion(const MleFit& fit, int n, int k, double lambda0);
double information_criterion(double loglik, int k, double lambda0);

}  // namespace mic
