#pragma once

#include <map>
#include <utility>

#include "mic/glm.hpp"
#include "mic/mic.hpp"

namespace mic {

struct InferenceReport {
  Vector se_gamma;
  Vector z;
  Vector p_values;
  Vector ci_lower;
  Vector ci_upper;
  std::map<int, double> se_beta_nonzero;
  double alpha = 0.05;
};

// sqrt(diag({-d2L(beta_tilde)}^{-1})) with the total observed information.
// Throws SingularDesign naming the column that dominates the null direction.
Vector se_gamma(const Dataset& d, const MicFit& fit);

struct WaldResult {
  Vector z;
  Vector p_values;
};
// z = gamma / se, two-sided normal p-values. Exact zeros get z = 0, p = 1.
WaldResult wald_test(const MicFit& fit, const Vector& se);

std::pair<Vector, Vector> confidence_interval(const MicFit& fit, const Vector& se, double alpha);

// Observed-information SEs for the nonzero block only.
std::map<int, double> se_beta_nonzero(const Dataset& d, const MicFit& fit);

InferenceReport make_inference_report(const Dataset& d, const MicFit& fit, double alpha = 0.05);

double normal_quantile(double prob);
double two_sided_p_value(double z);

}  // namespace mic
