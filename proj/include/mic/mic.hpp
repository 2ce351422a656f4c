#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mic/glm.hpp"
#include "mic/optimize.hpp"

namespace mic {

struct AnnealerSettings {
  double initial_temp = 0.0;  // <= 0: spread of the objective over 50 random probes
  double visiting_parameter = 2.62;
  long max_evals = 0;         // <= 0: 20000 * p
  long restart_patience = 0;  // <= 0: 2000 * p evaluations without a new best
};

struct MicConfig {
  double a = 10.0;
  std::optional<double> lambda0;  // unset: ln(n)
  double zero_threshold = 1e-4;   // on |beta|, standardized scale
  bool penalize_intercept = true;
  int n_starts = 5;
  AnnealerSettings annealer;
  PolishOptions local_polish;
  std::uint64_t seed = 0;
  bool refit_on_support = false;
  // Minimize the 1/n-scaled objective instead of the total; same minimizer.
  bool per_observation_scale = false;
};

// Throws InvalidInput when a knob is outside its admissible range.
void validate(const MicConfig& cfg);
double resolved_lambda0(const MicConfig& cfg, int n);

struct TheoryDiagnostics {
  Vector gamma0;
  Vector D;     // w(gamma0) + gamma0 * wdot(gamma0)
  Vector bias;  // {-d2L(beta0)}^{-1} (lambda0 / 2) (wdot / (w + gamma wdot)) at gamma_tilde
};

struct MicFit {
  Vector gamma_raw;    // optimizer output before thresholding
  Vector gamma_tilde;  // zero outside the support
  Vector beta_tilde;   // gamma_tilde * tanh(a gamma_tilde^2), or the support MLE when refitted
  Support support;
  double objective = 0.0;        // -2L(W gamma) + lambda0 tr(W) at gamma_raw
  double bic_equivalent = 0.0;   // -2L(beta_tilde) + lambda0 * |support|
  double lambda0 = 0.0;
  double a = 10.0;
  bool penalize_intercept = true;
  bool has_intercept = false;
  Vector se_gamma;
  Vector z_scores;
  Vector p_values;
  bool inference_available = false;
  std::optional<TheoryDiagnostics> diagnostics;
  long n_objective_evals = 0;
  int best_start_id = 0;
  std::vector<double> start_objectives;  // objective at each start point, by start id
  bool converged = false;
  bool mle_start_available = true;
  bool refitted = false;
  std::vector<std::string> warnings;
};

// Start ids used by solve_mic.
enum StartId : int { kStartAnnealer = 0, kStartMle = 1, kStartOrigin = 2, kStartMleHalf = 3, kStartMleQuarter = 4 };

// Objective in gamma-space. Gaussian data use a cached Gram matrix.
class MicObjective {
 public:
  MicObjective(const Dataset& d, const MicConfig& cfg);

  double value(const Vector& gamma) const;
  double value_and_gradient(const Vector& gamma, Vector& grad) const;
  Vector beta_of(const Vector& gamma) const;
  // True when coordinate j is reparameterized and penalized.
  bool penalized(int j) const { return penalized_[static_cast<size_t>(j)]; }
  double lambda0() const { return lambda0_; }
  double scale() const { return scale_; }

 private:
  double minus_two_loglik(const Vector& beta, Vector* score_out) const;

  const Dataset& d_;
  double a_;
  double lambda0_;
  double scale_;
  std::vector<bool> penalized_;
  Matrix gram_;
  Vector xty_;
  double yty_ = 0.0;
};

// -2L(W gamma) + lambda0 * sum_j w(gamma_j) over penalized coordinates.
double mic_objective(const Dataset& d, const Vector& gamma, const MicConfig& cfg);
// The 1/n-scaled objective (diagnostics).
double mic_objective_scaled(const Dataset& d, const Vector& gamma, const MicConfig& cfg);
Vector mic_gradient(const Dataset& d, const Vector& gamma, const MicConfig& cfg);

MicFit solve_mic(const Dataset& d, const MicConfig& cfg);

// Simulation-only: requires the true coefficient vector.
TheoryDiagnostics theory_diagnostics(const Dataset& d, const MicFit& fit, const Vector& beta0);

}  // namespace mic
