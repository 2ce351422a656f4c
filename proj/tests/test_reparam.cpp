#include <doctest.h>

#include <cmath>
#include <random>

#include "mic/reparam.hpp"
#include "support.hpp"

using namespace mic;
using mic::testing::central_diff;
using mic::testing::rel_err;

namespace {

// Plain bisection, used as an independent inverse.
double bisect_inverse(double beta, double a) {
  double lo = -std::abs(beta) - 1.0, hi = std::abs(beta) + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (beta_of_gamma(mid, a) < beta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// w as a function of beta, through the inverse map.
double w_of_beta(double beta, double a) {
  const double g = gamma_of_beta(beta, a);
  return std::tanh(a * g * g);
}

}  // namespace

TEST_CASE("forward map values") {
  CHECK(beta_of_gamma(0.0, 10.0) == 0.0);
  CHECK(beta_of_gamma(1.0, 10.0) == doctest::Approx(0.9999999959).epsilon(1e-10));
  CHECK(beta_of_gamma(0.3, 10.0) == doctest::Approx(0.214889).epsilon(1e-6));
  CHECK(beta_of_gamma(-0.3, 10.0) == -beta_of_gamma(0.3, 10.0));
}

TEST_CASE("inverse map") {
  CHECK(gamma_of_beta(0.0, 10.0) == 0.0);
  const double g = gamma_of_beta(2.0, 10.0);
  CHECK(std::abs(g - bisect_inverse(2.0, 10.0)) < 1e-14);
  CHECK(std::abs(g - 2.0) < 1e-14);
  CHECK(std::abs(gamma_of_beta(beta_of_gamma(0.05, 10.0), 10.0) - 0.05) < 1e-10);
}

TEST_CASE("round trip over random gammas") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> ua(1.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = u(rng);
    const double a = ua(rng);
    CHECK(std::abs(gamma_of_beta(beta_of_gamma(g, a), a) - g) < 1e-10);
  }
}

TEST_CASE("point invariants") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double g = u(rng);
    const ReparamPoint pt = reparam_point(g, 10.0);
    CHECK(pt.beta == g * pt.w);
    CHECK(std::signbit(pt.beta) == std::signbit(g));
    CHECK(std::abs(pt.beta) <= std::abs(g));
    CHECK(pt.dbeta_dgamma > 0.0);
    CHECK(rel_err(pt.dbeta_dgamma, central_diff([](double t) { return beta_of_gamma(t, 10.0); }, g, 1e-6)) < 1e-7);
    if (std::abs(g) >= 1.0) CHECK(std::abs(pt.beta - g) < 1e-8);
  }
  CHECK(reparam_point(0.0, 10.0).dbeta_dgamma == 0.0);
}

TEST_CASE("zero maps to zero and only zero does") {
  CHECK(beta_of_gamma(0.0, 10.0) == 0.0);
  CHECK(gamma_of_beta(0.0, 10.0) == 0.0);
  CHECK(gamma_of_beta(1e-12, 10.0) != 0.0);
  CHECK(gamma_of_beta(-1e-12, 10.0) < 0.0);
}

TEST_CASE("penalty derivative along beta") {
  CHECK(std::abs(penalty_dbeta(3.0, 10.0)) < 1e-12);
  CHECK(penalty_dbeta(0.3, 10.0) == doctest::Approx(2.9215 / (0.716298 + 0.3 * 2.9215)).epsilon(1e-4));
  CHECK(penalty_dbeta(0.3, 10.0) == doctest::Approx(1.8343).epsilon(1e-4));
  CHECK(penalty_dbeta(-0.3, 10.0) == -penalty_dbeta(0.3, 10.0));
  CHECK_THROWS_AS(penalty_dbeta(0.0, 10.0), SingularPoint);
  for (double g : {-0.9, -0.25, 0.1, 0.3, 0.6}) {
    const double b = beta_of_gamma(g, 10.0);
    const double fd = central_diff([](double t) { return w_of_beta(t, 10.0); }, b, 1e-7);
    CHECK(rel_err(penalty_dbeta(g, 10.0), fd) < 1e-6);
  }
}

TEST_CASE("penalty second derivative along beta") {
  CHECK(std::abs(penalty_d2beta(3.0, 10.0)) < 1e-12);
  CHECK_THROWS_AS(penalty_d2beta(0.0, 10.0), SingularPoint);
  for (double g : {-0.5, 0.3, 0.45}) {
    const double b = beta_of_gamma(g, 10.0);
    const double h = 1e-4;
    const double fd = (w_of_beta(b + h, 10.0) - 2.0 * w_of_beta(b, 10.0) + w_of_beta(b - h, 10.0)) / (h * h);
    CHECK(rel_err(penalty_d2beta(g, 10.0), fd) < 1e-5);
  }
  double prev = 0.0;
  for (double g : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    const double v = std::abs(penalty_d2beta(g, 10.0));
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e4);
}
