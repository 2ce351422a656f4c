#include "mic/reparam.hpp"

#include <algorithm>
#include <cmath>

#include "mic/dent.hpp"

namespace mic {

ReparamPoint reparam_point(double gamma, double a) {
  const TanhDent t = tanh_dent(gamma, a);
  return {gamma, gamma * t.w, t.w, t.wdot, t.w + gamma * t.wdot, a};
}

double beta_of_gamma(double gamma, double a) { return gamma * std::tanh(a * gamma * gamma); }

double gamma_of_beta(double beta, double a) {
  if (beta == 0.0) return 0.0;
  const double target = std::abs(beta);
  // |gamma| >= |beta| always; widen the upper end until it brackets the root.
  double lo = 0.0;
  double hi = target * 1.01 + 1.0;
  while (beta_of_gamma(hi, a) < target) hi *= 2.0;

  double g = std::min(hi, std::max(target, std::cbrt(target / a)));
  for (int it = 0; it < 200; ++it) {
    const ReparamPoint pt = reparam_point(g, a);
    const double f = pt.beta - target;
    if (f == 0.0) break;
    if (f > 0.0) hi = g; else lo = g;
    double next = pt.dbeta_dgamma > 0.0 ? g - f / pt.dbeta_dgamma : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - g) <= 1e-14 * std::max(1.0, std::abs(g)) || hi - lo <= 1e-15 * std::max(1.0, hi)) {
      g = next;
      break;
    }
    g = next;
  }
  return beta > 0.0 ? g : -g;
}

double penalty_dbeta(double gamma, double a) {
  if (gamma == 0.0) throw SingularPoint("d w / d beta does not exist at beta = 0");
  const ReparamPoint pt = reparam_point(gamma, a);
  return pt.wdot / pt.dbeta_dgamma;
}

double penalty_d2beta(double gamma, double a) {
  if (gamma == 0.0) throw SingularPoint("d^2 w / d beta^2 does not exist at beta = 0");
  const TanhDent t = tanh_dent(gamma, a);
  const double denom = t.w + gamma * t.wdot;
  return (t.w * t.wddot - 2.0 * t.wdot * t.wdot) / (denom * denom * denom);
}

}  // namespace mic
