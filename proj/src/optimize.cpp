#include "mic/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mic {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(a) ^ (b + 0x632be59bd9b4e019ULL));
}

PolishResult bfgs_minimize(const ValueGradFn& fg, const Vector& x0, const PolishOptions& opts) {
  const Eigen::Index n = x0.size();
  PolishResult res;
  res.x = x0;
  res.gradient = Vector::Zero(n);
  res.value = fg(res.x, res.gradient);
  res.evals = 1;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  Matrix Hinv = Matrix::Identity(n, n);
  Vector g_new(n);
  bool first = true;

  for (int it = 0; it < opts.max_iter; ++it) {
    if (res.gradient.lpNorm<Eigen::Infinity>() <= opts.tolerance * std::max(1.0, std::abs(res.value))) {
      res.converged = true;
      break;
    }
    Vector dir = -Hinv * res.gradient;
    double slope = dir.dot(res.gradient);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      dir = -res.gradient;
      slope = dir.dot(res.gradient);
      first = true;
    }
    if (first) {
      // Scale the first step so it moves at most unit length.
      const double len = dir.lpNorm<Eigen::Infinity>();
      if (len > 1.0) {
        dir /= len;
        slope /= len;
      }
    }

    double step = 1.0;
    Vector x_new(n);
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + step * dir;
      f_new = fg(x_new, g_new);
      ++res.evals;
      if (std::isfinite(f_new) && f_new <= res.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) {
      // No descent possible along a BFGS or steepest direction: stationary to
      // working precision.
      if (!first) {
        Hinv.setIdentity();
        first = true;
        continue;
      }
      res.converged = res.gradient.lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, std::abs(res.value));
      break;
    }
    const Vector s = x_new - res.x;
    const Vector y = g_new - res.gradient;
    const double sy = s.dot(y);
    const double f_old = res.value;
    res.x = x_new;
    res.value = f_new;
    res.gradient = g_new;
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (first) {
        Hinv = Matrix::Identity(n, n) * (sy / y.squaredNorm());
        first = false;
      }
      const double rho = 1.0 / sy;
      const Vector Hy = Hinv * y;
      const double yHy = y.dot(Hy);
      Hinv += ((1.0 + rho * yHy) * rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
    }
    if (std::abs(f_old - f_new) <= 1e-15 * std::max(1.0, std::abs(f_new)) &&
        s.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, res.x.lpNorm<Eigen::Infinity>())) {
      res.converged = res.gradient.lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, std::abs(res.value));
      break;
    }
  }
  if (!res.converged)
    res.converged = res.gradient.lpNorm<Eigen::Infinity>() <= opts.tolerance * std::max(1.0, std::abs(res.value));
  return res;
}

VisitingDistribution::VisitingDistribution(double qv) : qv_(qv) {
  if (!(qv > 1.0 && qv < 3.0)) throw InvalidInput("visiting parameter must lie in (1, 3)");
  const double factor2 = std::exp((4.0 - qv) * std::log(qv - 1.0));
  const double factor3 = std::exp((2.0 - qv) * std::log(2.0) / (qv - 1.0));
  factor4_p_ = std::sqrt(std::numbers::pi) * factor2 / (factor3 * (3.0 - qv));
  const double factor5 = 1.0 / (qv - 1.0) - 0.5;
  const double d1 = 2.0 - factor5;
  factor6_ = std::numbers::pi * (1.0 - factor5) / std::sin(std::numbers::pi * (1.0 - factor5)) /
             std::exp(std::lgamma(d1));
}

double VisitingDistribution::sample(double temperature, Rng& rng) const {
  std::normal_distribution<double> normal;
  double x = normal(rng);
  const double y = normal(rng);
  const double factor1 = std::exp(std::log(temperature) / (qv_ - 1.0));
  const double factor4 = factor4_p_ * factor1;
  x *= std::exp(-(qv_ - 1.0) * std::log(factor6_ / factor4) / (3.0 - qv_));
  const double den = std::exp((qv_ - 1.0) * std::log(std::abs(y)) / (3.0 - qv_));
  return x / den;
}

namespace {

constexpr double kTailLimit = 1e8;

double wrap_into(double v, double lo, double range) {
  double a = std::fmod(v - lo, range);
  if (a < 0.0) a += range;
  return lo + a;
}

}  // namespace

AnnealResult generalized_anneal(const ObjectiveFn& f, const Vector& lower, const Vector& upper, const Vector& x0,
                                const AnnealOptions& opts, Rng& rng,
                                const std::function<PolishResult(const Vector&)>& polish) {
  const Eigen::Index dim = lower.size();
  AnnealResult res;
  const long max_evals = opts.max_evals > 0 ? opts.max_evals : 20000L * std::max<Eigen::Index>(dim, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector range = upper - lower;

  auto random_point = [&] {
    Vector x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x[j] = lower[j] + unif(rng) * range[j];
    return x;
  };

  double t0 = opts.initial_temp;
  if (t0 <= 0.0) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < 50; ++k) {
      const double v = f(random_point());
      ++res.evals;
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    t0 = (hi > lo) ? hi - lo : 1.0;
  }
  const double restart_temp = t0 * opts.restart_temp_ratio;
  const VisitingDistribution visit(opts.visiting_param);
  const double qa = opts.acceptance_param;

  Vector x = x0.size() == dim ? x0 : random_point();
  double e = f(x);
  ++res.evals;
  res.best = x;
  res.best_value = e;
  long last_improvement = res.evals;

  auto consider_best = [&](const Vector& cand, double value) {
    if (value < res.best_value) {
      res.best = cand;
      res.best_value = value;
      last_improvement = res.evals;
      return true;
    }
    return false;
  };

  const double t1 = std::exp((opts.visiting_param - 1.0) * std::log(2.0)) - 1.0;
  long step = 0;
  long stale_steps = 0;
  long stale_limit = 1000;
  Vector cand(dim);
  while (res.evals < max_evals) {
    const double s = static_cast<double>(step) + 2.0;
    const double t2 = std::exp((opts.visiting_param - 1.0) * std::log(s)) - 1.0;
    const double temp = t0 * t1 / t2;
    if (temp < restart_temp) {
      x = random_point();
      e = f(x);
      ++res.evals;
      consider_best(x, e);
      step = 0;
      ++res.restarts;
      continue;
    }
    const double temp_step = temp / (static_cast<double>(step) + 1.0);
    bool improved = false;
    for (Eigen::Index j = 0; j < 2 * dim && res.evals < max_evals; ++j) {
      cand = x;
      auto move = [&](Eigen::Index k) {
        double v = visit.sample(temp, rng);
        if (v > kTailLimit) v = kTailLimit * unif(rng);
        else if (v < -kTailLimit) v = -kTailLimit * unif(rng);
        cand[k] = wrap_into(x[k] + v, lower[k], range[k]);
      };
      if (j < dim) {
        for (Eigen::Index k = 0; k < dim; ++k) move(k);
      } else {
        move(j - dim);
      }
      const double e_new = f(cand);
      ++res.evals;
      bool accept = false;
      if (e_new < e) {
        accept = true;
      } else if (std::isfinite(e_new)) {
        const double r = unif(rng);
        const double pqv_temp = 1.0 - (1.0 - qa) * (e_new - e) / temp_step;
        const double pqv = pqv_temp <= 0.0 ? 0.0 : std::exp(std::log(pqv_temp) / (1.0 - qa));
        accept = r <= pqv;
      }
      if (accept) {
        x = cand;
        e = e_new;
        improved = consider_best(x, e) || improved;
      }
    }
    if (improved) stale_steps = 0;
    else ++stale_steps;
    if (improved && polish) {
      PolishResult pr = polish(res.best);
      res.evals += pr.evals;
      if (pr.value < res.best_value) {
        consider_best(pr.x, pr.value);
        x = pr.x;
        e = pr.value;
      }
    }
    // A chain stuck away from the best point gets polished where it stands,
    // first after 1000 stale steps and then every `dim` steps.
    if (polish && stale_steps >= stale_limit) {
      PolishResult pr = polish(x);
      res.evals += pr.evals;
      stale_steps = 0;
      stale_limit = std::max<long>(dim, 1);
      if (consider_best(pr.x, pr.value)) {
        x = pr.x;
        e = pr.value;
      }
    }
    ++step;
    if (opts.restart_patience > 0 && res.evals - last_improvement > opts.restart_patience) {
      x = random_point();
      e = f(x);
      ++res.evals;
      consider_best(x, e);
      last_improvement = res.evals;
      step = 0;
      ++res.restarts;
    }
  }
  res.budget_exhausted = res.evals >= max_evals;
  return res;
}

}  // namespace mic
