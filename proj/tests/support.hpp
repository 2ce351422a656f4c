#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "mic/glm.hpp"

namespace mic::testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Central difference with a step scaled to |x|.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  const double step = h * std::max(1.0, std::abs(x));
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector a = x, b = x;
    const double step = h * std::max(1.0, std::abs(x[j]));
    a[j] += step;
    b[j] -= step;
    g[j] = (f(a) - f(b)) / (2.0 * step);
  }
  return g;
}

inline double max_rel_err(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) m = std::max(m, rel_err(a[j], b[j]));
  return m;
}

// Random GLM data with a sparse-ish truth; X standardized.
inline Dataset random_dataset(Family fam, int n, int p, std::uint64_t seed, bool intercept = false,
                              double signal = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = z(rng);
  Vector beta = Vector::Zero(p);
  for (int j = 0; j < p; j += 2) beta[j] = signal * (j % 4 == 0 ? 1.0 : -0.7);
  const Vector eta = X * beta * 0.5;
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    switch (fam) {
      case Family::GaussianIdentity: y[i] = eta[i] + z(rng); break;
      case Family::BernoulliLogit: {
        std::bernoulli_distribution b(1.0 / (1.0 + std::exp(-eta[i])));
        y[i] = b(rng) ? 1.0 : 0.0;
        break;
      }
      case Family::PoissonLog: {
        std::poisson_distribution<int> pd(std::exp(eta[i]));
        y[i] = pd(rng);
        break;
      }
    }
  }
  DatasetOptions o;
  o.add_intercept = intercept;
  return make_dataset(std::move(X), std::move(y), fam, {}, o);
}

}  // namespace mic::testing
