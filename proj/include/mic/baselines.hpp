#pragma once

#include <vector>

#include "mic/glm.hpp"

namespace mic {

struct SubsetSearchOptions {
  int max_p = 20;
  // Count an always-included intercept in k (mirrors MicConfig::penalize_intercept).
  bool count_intercept = true;
  int threads = 1;
};

struct SizeBest {
  int size;
  Support support;
  double criterion;
};

struct SubsetSearchResult {
  Support best_support;
  double best_criterion = 0.0;
  MleFit best_fit;
  std::vector<SizeBest> per_size_best;
  long models_evaluated = 0;
  long rank_deficient_skipped = 0;
};

// Exhaustive search of -2L + lambda0 * k over all 2^p supports (the intercept,
// when present, is in every support). Throws InvalidInput if p > max_p.
SubsetSearchResult best_subset(const Dataset& d, double lambda0, const SubsetSearchOptions& opts = {});

MleFit oracle_fit(const Dataset& d, const Support& true_support);
MleFit full_mle(const Dataset& d);

// sqrt of the diagonal of the inverse support block of the observed information.
Vector mle_standard_errors(const MleFit& fit);

}  // namespace mic
