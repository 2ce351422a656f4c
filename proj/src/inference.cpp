#include "mic/inference.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace mic {

namespace {

const std::string& column_name(const Dataset& d, int j) {
  static const std::string unnamed = "?";
  return j < static_cast<int>(d.column_names.size()) ? d.column_names[static_cast<size_t>(j)] : unnamed;
}

// Inverse of a symmetric positive definite matrix, or SingularDesign naming
// the coordinate carrying the largest weight in the null direction.
Matrix spd_inverse(const Matrix& h, const Dataset& d, const std::vector<int>& index) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  const double bottom = es.eigenvalues().minCoeff();
  if (!(bottom > 1e-12 * std::max(top, 1.0))) {
    Eigen::Index worst = 0;
    es.eigenvectors().col(0).cwiseAbs().maxCoeff(&worst);
    std::ostringstream os;
    os << "observed information is singular or indefinite (min eigenvalue " << bottom
       << "); null direction dominated by column '" << column_name(d, index[static_cast<size_t>(worst)]) << "'";
    throw SingularDesign(os.str());
  }
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double normal_quantile(double prob) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double two_sided_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

Vector se_gamma(const Dataset& d, const MicFit& fit) {
  const Matrix h = neg_hessian(d, fit.beta_tilde);
  const Matrix inv = spd_inverse(h, d, full_support(d.p()));
  return inv.diagonal().cwiseSqrt();
}

WaldResult wald_test(const MicFit& fit, const Vector& se) {
  const Eigen::Index p = fit.gamma_tilde.size();
  if (se.size() != p) throw InvalidInput("se has wrong length");
  WaldResult out{Vector::Zero(p), Vector::Ones(p)};
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(se[j] > 0.0)) throw InvalidInput("standard errors must be positive");
    if (fit.gamma_tilde[j] == 0.0) continue;
    out.z[j] = fit.gamma_tilde[j] / se[j];
    out.p_values[j] = two_sided_p_value(out.z[j]);
  }
  return out;
}

std::pair<Vector, Vector> confidence_interval(const MicFit& fit, const Vector& se, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  const double half = normal_quantile(1.0 - alpha / 2.0);
  return {fit.gamma_tilde - half * se, fit.gamma_tilde + half * se};
}

std::map<int, double> se_beta_nonzero(const Dataset& d, const MicFit& fit) {
  std::map<int, double> out;
  if (fit.support.empty()) return out;
  const Matrix h = neg_hessian(d, fit.beta_tilde);
  const auto k = static_cast<Eigen::Index>(fit.support.size());
  Matrix block(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) block(a, b) = h(fit.support[a], fit.support[b]);
  const Matrix inv = spd_inverse(block, d, fit.support);
  for (Eigen::Index a = 0; a < k; ++a) out[fit.support[a]] = std::sqrt(inv(a, a));
  return out;
}

InferenceReport make_inference_report(const Dataset& d, const MicFit& fit, double alpha) {
  InferenceReport r;
  r.alpha = alpha;
  r.se_gamma = se_gamma(d, fit);
  const WaldResult w = wald_test(fit, r.se_gamma);
  r.z = w.z;
  r.p_values = w.p_values;
  std::tie(r.ci_lower, r.ci_upper) = confidence_interval(fit, r.se_gamma, alpha);
  r.se_beta_nonzero = se_beta_nonzero(d, fit);
  return r;
}

}  // namespace mic
