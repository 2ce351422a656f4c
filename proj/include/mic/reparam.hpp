#pragma once

#include <stdexcept>

namespace mic {

// beta = gamma * tanh(a gamma^2): a smooth odd bijection of the real line
// whose inverse makes the penalty tanh(a gamma^2) singular at beta = 0.
struct ReparamPoint {
  double gamma;
  double beta;
  double w;
  double wdot;
  double dbeta_dgamma;  // w + gamma * wdot
  double a;
};

class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

ReparamPoint reparam_point(double gamma, double a);

double beta_of_gamma(double gamma, double a);

// Unique root of gamma * tanh(a gamma^2) = beta (bracketed safeguarded Newton).
double gamma_of_beta(double beta, double a);

// d w(gamma) / d beta = wdot / (w + gamma wdot). Throws SingularPoint at gamma = 0.
double penalty_dbeta(double gamma, double a);

// d^2 w(gamma) / d beta^2 = (w wddot - 2 wdot^2) / (w + gamma wdot)^3.
double penalty_d2beta(double gamma, double a);

}  // namespace mic
