#include "mic/mic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mic/dent.hpp"
#include "mic/inference.hpp"
#include "mic/reparam.hpp"

namespace mic {

void validate(const MicConfig& cfg) {
  if (!(cfg.a >= 1.0 && cfg.a <= 1000.0)) throw InvalidInput("a must lie in [1, 1000]");
  if (!(cfg.zero_threshold > 0.0 && cfg.zero_threshold < 0.01)) throw InvalidInput("zero_threshold must lie in (0, 0.01)");
  if (cfg.lambda0 && !(*cfg.lambda0 >= 0.0 && std::isfinite(*cfg.lambda0)))
    throw InvalidInput("lambda0 must be a nonnegative finite number");
  if (cfg.n_starts < 0) throw InvalidInput("n_starts must be nonnegative");
  if (!(cfg.annealer.visiting_parameter > 1.0 && cfg.annealer.visiting_parameter < 3.0))
    throw InvalidInput("visiting_parameter must lie in (1, 3)");
  if (cfg.local_polish.max_iter < 1) throw InvalidInput("local_polish.max_iter must be positive");
}

double resolved_lambda0(const MicConfig& cfg, int n) { return cfg.lambda0 ? *cfg.lambda0 : std::log(static_cast<double>(n)); }

MicObjective::MicObjective(const Dataset& d, const MicConfig& cfg)
    : d_(d),
      a_(cfg.a),
      lambda0_(resolved_lambda0(cfg, d.n())),
      scale_(cfg.per_observation_scale ? 1.0 / d.n() : 1.0),
      penalized_(static_cast<size_t>(d.p()), true) {
  if (d.has_intercept && !cfg.penalize_intercept) penalized_[0] = false;
  if (d.family == Family::GaussianIdentity) {
    gram_ = d.X.transpose() * d.X;
    xty_ = d.X.transpose() * d.y;
    yty_ = d.y.squaredNorm();
  }
}

Vector MicObjective::beta_of(const Vector& gamma) const {
  Vector beta(gamma.size());
  for (Eigen::Index j = 0; j < gamma.size(); ++j)
    beta[j] = penalized_[static_cast<size_t>(j)] ? beta_of_gamma(gamma[j], a_) : gamma[j];
  return beta;
}

double MicObjective::minus_two_loglik(const Vector& beta, Vector* score_out) const {
  if (d_.family == Family::GaussianIdentity) {
    const double n = d_.n();
    const Vector gb = gram_ * beta;
    double rss = yty_ - 2.0 * beta.dot(xty_) + beta.dot(gb);
    if (rss < 1e-8 * yty_) rss = (d_.y - d_.X * beta).squaredNorm();
    if (score_out) *score_out = (n / rss) * (xty_ - gb);
    return n * std::log(rss / n) + n * (1.0 + std::log(2.0 * std::numbers::pi));
  }
  if (score_out) *score_out = score(d_, beta);
  return -2.0 * log_likelihood(d_, beta);
}

double MicObjective::value(const Vector& gamma) const {
  double pen = 0.0;
  for (Eigen::Index j = 0; j < gamma.size(); ++j)
    if (penalized_[static_cast<size_t>(j)]) pen += std::tanh(a_ * gamma[j] * gamma[j]);
  return scale_ * (minus_two_loglik(beta_of(gamma), nullptr) + lambda0_ * pen);
}

double MicObjective::value_and_gradient(const Vector& gamma, Vector& grad) const {
  const Eigen::Index p = gamma.size();
  Vector beta(p);
  Vector dbeta(p);
  Vector wdot = Vector::Zero(p);
  double pen = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (penalized_[static_cast<size_t>(j)]) {
      const TanhDent t = tanh_dent(gamma[j], a_);
      beta[j] = gamma[j] * t.w;
      dbeta[j] = t.w + gamma[j] * t.wdot;
      wdot[j] = t.wdot;
      pen += t.w;
    } else {
      beta[j] = gamma[j];
      dbeta[j] = 1.0;
    }
  }
  Vector sc;
  const double m2l = minus_two_loglik(beta, &sc);
  grad = scale_ * (-2.0 * sc.cwiseProduct(dbeta) + lambda0_ * wdot);
  return scale_ * (m2l + lambda0_ * pen);
}

double mic_objective(const Dataset& d, const Vector& gamma, const MicConfig& cfg) {
  MicConfig c = cfg;
  c.per_observation_scale = false;
  return MicObjective(d, c).value(gamma);
}

double mic_objective_scaled(const Dataset& d, const Vector& gamma, const MicConfig& cfg) {
  return mic_objective(d, gamma, cfg) / d.n();
}

Vector mic_gradient(const Dataset& d, const Vector& gamma, const MicConfig& cfg) {
  MicConfig c = cfg;
  c.per_observation_scale = false;
  Vector g;
  MicObjective(d, c).value_and_gradient(gamma, g);
  return g;
}

MicFit solve_mic(const Dataset& d, const MicConfig& cfg) {
  validate(cfg);
  if (d.p() == 0) throw InvalidInput("dataset has no columns");
  const int p = d.p();
  const MicObjective obj(d, cfg);

  MicFit fit;
  fit.lambda0 = obj.lambda0();
  fit.a = cfg.a;
  fit.penalize_intercept = cfg.penalize_intercept;
  fit.has_intercept = d.has_intercept;
  if (cfg.a < 10.0) fit.warnings.push_back("a below 10: selection may be unstable");

  // Full-model MLE, mapped to gamma-space, anchors the search box and two starts.
  Vector gamma_mle = Vector::Zero(p);
  double bound = 10.0;
  try {
    const MleFit mle = fit_mle(d, full_support(p));
    if (!mle.converged) throw SingularDesign("full-model MLE did not converge");
    for (int j = 0; j < p; ++j)
      gamma_mle[j] = obj.penalized(j) ? gamma_of_beta(mle.beta_hat[j], cfg.a) : mle.beta_hat[j];
    bound = 2.0 * mle.beta_hat.lpNorm<Eigen::Infinity>() + 2.0;
  } catch (const std::exception& e) {
    fit.mle_start_available = false;
    fit.warnings.push_back(std::string("MLE start unavailable: ") + e.what());
  }

  Rng rng(mix_seed(cfg.seed, 0x4d4943ULL));
  const ValueGradFn fg = [&obj](const Vector& g, Vector& grad) { return obj.value_and_gradient(g, grad); };
  const ObjectiveFn f = [&obj](const Vector& g) { return obj.value(g); };
  auto polish = [&](const Vector& x0) { return bfgs_minimize(fg, x0, cfg.local_polish); };

  std::vector<Vector> starts;
  std::vector<int> start_ids;
  auto add_start = [&](int id, Vector x) {
    start_ids.push_back(id);
    starts.push_back(std::move(x));
  };

  AnnealOptions ao;
  ao.initial_temp = cfg.annealer.initial_temp;
  ao.visiting_param = cfg.annealer.visiting_parameter;
  ao.max_evals = cfg.annealer.max_evals > 0 ? cfg.annealer.max_evals : 20000L * p;
  ao.restart_patience = cfg.annealer.restart_patience > 0 ? cfg.annealer.restart_patience : 2000L * p;
  const Vector lower = Vector::Constant(p, -bound);
  const Vector upper = Vector::Constant(p, bound);
  const Vector x0 = fit.mle_start_available ? gamma_mle : Vector::Zero(p);
  const AnnealResult ar = generalized_anneal(f, lower, upper, x0, ao, rng, polish);
  fit.n_objective_evals += ar.evals;
  add_start(kStartAnnealer, ar.best);

  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int deterministic = 0;
  auto budget_left = [&] { return deterministic < cfg.n_starts; };
  if (fit.mle_start_available && budget_left()) { add_start(kStartMle, gamma_mle); ++deterministic; }
  if (budget_left()) { add_start(kStartOrigin, Vector::Zero(p)); ++deterministic; }
  if (fit.mle_start_available && budget_left()) { add_start(kStartMleHalf, 0.5 * gamma_mle); ++deterministic; }
  if (fit.mle_start_available && budget_left()) { add_start(kStartMleQuarter, 0.25 * gamma_mle); ++deterministic; }
  for (int id = 5; budget_left(); ++id) {
    Vector x(p);
    for (int j = 0; j < p; ++j) x[j] = bound * unif(rng);
    add_start(id, std::move(x));
    ++deterministic;
  }

  double best_value = std::numeric_limits<double>::infinity();
  Vector best_gamma = Vector::Zero(p);
  int max_id = 0;
  for (int id : start_ids) max_id = std::max(max_id, id);
  fit.start_objectives.assign(static_cast<size_t>(max_id) + 1, std::numeric_limits<double>::quiet_NaN());
  for (size_t s = 0; s < starts.size(); ++s) {
    fit.start_objectives[static_cast<size_t>(start_ids[s])] = mic_objective(d, starts[s], cfg);
    const PolishResult pr = polish(starts[s]);
    fit.n_objective_evals += pr.evals;
    if (pr.value < best_value) {
      best_value = pr.value;
      best_gamma = pr.x;
      fit.best_start_id = start_ids[s];
      fit.converged = pr.converged;
    }
  }

  fit.gamma_raw = best_gamma;
  fit.objective = mic_objective(d, best_gamma, cfg);
  fit.gamma_tilde = Vector::Zero(p);
  fit.beta_tilde = Vector::Zero(p);
  const Vector beta_raw = obj.beta_of(best_gamma);
  int k_penalized = 0;
  for (int j = 0; j < p; ++j) {
    if (std::abs(beta_raw[j]) >= cfg.zero_threshold) {
      fit.support.push_back(j);
      fit.gamma_tilde[j] = best_gamma[j];
      fit.beta_tilde[j] = beta_raw[j];
      if (obj.penalized(j)) ++k_penalized;
    }
  }
  if (cfg.refit_on_support) {
    try {
      fit.beta_tilde = fit_mle(d, fit.support).beta_hat;
      fit.refitted = true;
    } catch (const std::exception& e) {
      fit.warnings.push_back(std::string("refit on support failed: ") + e.what());
    }
  }
  fit.bic_equivalent = information_criterion(log_likelihood(d, fit.beta_tilde), k_penalized, fit.lambda0);

  try {
    fit.se_gamma = se_gamma(d, fit);
    const WaldResult w = wald_test(fit, fit.se_gamma);
    fit.z_scores = w.z;
    fit.p_values = w.p_values;
    fit.inference_available = true;
  } catch (const std::exception& e) {
    fit.warnings.push_back(std::string("inference unavailable: ") + e.what());
  }
  return fit;
}

TheoryDiagnostics theory_diagnostics(const Dataset& d, const MicFit& fit, const Vector& beta0) {
  const int p = d.p();
  if (beta0.size() != p) throw InvalidInput("beta0 has wrong length");
  TheoryDiagnostics out;
  out.gamma0 = Vector::Zero(p);
  out.D = Vector::Zero(p);
  for (int j = 0; j < p; ++j) {
    out.gamma0[j] = gamma_of_beta(beta0[j], fit.a);
    out.D[j] = reparam_point(out.gamma0[j], fit.a).dbeta_dgamma;
  }
  // Zero estimates sit exactly on the singular point of d w / d beta; they
  // contribute nothing to the penalty gradient.
  Vector pen_grad = Vector::Zero(p);
  for (int j : fit.support) {
    const double g = fit.gamma_tilde[j];
    if (g != 0.0) pen_grad[j] = penalty_dbeta(g, fit.a);
  }
  pen_grad *= fit.lambda0 / 2.0;
  const Matrix h = neg_hessian(d, beta0);
  Eigen::FullPivLU<Matrix> lu(h);
  if (!lu.isInvertible()) throw SingularDesign("observed information at beta0 is singular");
  out.bias = lu.solve(pen_grad);
  return out;
}

}  // namespace mic
