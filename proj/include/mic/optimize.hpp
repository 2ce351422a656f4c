#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "mic/glm.hpp"

namespace mic {

using Rng = std::mt19937_64;

// Value-only and value-plus-gradient objective callbacks.
using ObjectiveFn = std::function<double(const Vector&)>;
using ValueGradFn = std::function<double(const Vector&, Vector&)>;

struct PolishOptions {
  double tolerance = 1e-9;  // on ||grad||_inf relative to max(1, |f|)
  int max_iter = 200;
};

struct PolishResult {
  Vector x;
  double value = 0.0;
  Vector gradient;
  int iterations = 0;
  long evals = 0;
  bool converged = false;
};

// BFGS with an Armijo backtracking line search.
PolishResult bfgs_minimize(const ValueGradFn& fg, const Vector& x0, const PolishOptions& opts = {});

struct AnnealOptions {
  double initial_temp = 0.0;  // <= 0: objective spread over 50 random probes
  double visiting_param = 2.62;
  double acceptance_param = -5.0;
  long max_evals = 0;          // <= 0: 20000 * dim
  long restart_patience = 0;   // restart the chain after this many evals without a new best; <= 0 disables
  double restart_temp_ratio = 2e-5;
};

struct AnnealResult {
  Vector best;
  double best_value = 0.0;
  long evals = 0;
  int restarts = 0;
  bool budget_exhausted = false;
};

// Generalized simulated annealing over the box [lower, upper] with a
// Tsallis-Stariolo visiting distribution. `polish`, when set, is applied to
// each new best point found by a Markov chain and to chains that stall, and
// its result kept if better. Runs until max_evals is spent.
AnnealResult generalized_anneal(const ObjectiveFn& f, const Vector& lower, const Vector& upper,
                                const Vector& x0, const AnnealOptions& opts, Rng& rng,
                                const std::function<PolishResult(const Vector&)>& polish = {});

// Draws from the visiting distribution at the given temperature.
class VisitingDistribution {
 public:
  explicit VisitingDistribution(double qv);
  double sample(double temperature, Rng& rng) const;

 private:
  double qv_;
  double factor4_p_;
  double factor6_;
};

// splitmix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace mic
