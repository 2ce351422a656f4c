#include "mic/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

namespace mic {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Candidate {
  Support support;
  double criterion = std::numeric_limits<double>::infinity();
  bool valid = false;
};

// a better than b: lower criterion, lexicographically smaller support on ties.
bool better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.criterion < b.criterion - kTieTolerance) return true;
  if (a.criterion > b.criterion + kTieTolerance) return false;
  return a.support < b.support;
}

struct BlockResult {
  std::vector<Candidate> per_size;
  long evaluated = 0;
  long skipped = 0;
};

// Supports visited in Gray-code order; consecutive supports differ by one
// column, so IRLS warm-starts from the previous solution. Each block starts
// cold, which keeps results independent of the thread count.
BlockResult search_block(const Dataset& d, const std::vector<int>& pool, bool intercept, double lambda0,
                         bool count_intercept, std::uint64_t first, std::uint64_t last) {
  BlockResult out;
  out.per_size.resize(pool.size() + 1);
  Vector warm = Vector::Zero(d.p());
  bool have_warm = false;
  for (std::uint64_t idx = first; idx < last; ++idx) {
    const std::uint64_t code = idx ^ (idx >> 1);
    Support s;
    if (intercept) s.push_back(0);
    for (size_t b = 0; b < pool.size(); ++b)
      if (code & (1ULL << b)) s.push_back(pool[b]);
    std::sort(s.begin(), s.end());
    const int size = static_cast<int>(std::popcount(code));
    try {
      const MleFit fit = fit_mle(d, s, {}, have_warm ? &warm : nullptr);
      ++out.evaluated;
      warm = fit.beta_hat;
      have_warm = true;
      const int k = size + ((intercept && count_intercept) ? 1 : 0);
      Candidate c{s, information_criterion(fit.loglik, k, lambda0), std::isfinite(fit.loglik)};
      if (better(c, out.per_size[static_cast<size_t>(size)])) out.per_size[static_cast<size_t>(size)] = std::move(c);
    } catch (const SingularDesign&) {
      ++out.skipped;
    }
  }
  return out;
}

}  // namespace

SubsetSearchResult best_subset(const Dataset& d, double lambda0, const SubsetSearchOptions& opts) {
  std::vector<int> pool;
  for (int j = d.has_intercept ? 1 : 0; j < d.p(); ++j) pool.push_back(j);
  const int p_search = static_cast<int>(pool.size());
  if (p_search > opts.max_p) {
    throw InvalidInput("best subset search over " + std::to_string(p_search) + " predictors exceeds max_p = " +
                       std::to_string(opts.max_p) + "; exhaustive enumeration is infeasible at this size");
  }
  const std::uint64_t total = 1ULL << p_search;
  const std::uint64_t block = 1ULL << std::min(p_search, 8);
  const std::uint64_t n_blocks = total / block;
  std::vector<BlockResult> blocks(n_blocks);

  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(n_blocks)));
  auto work = [&](int tid) {
    for (std::uint64_t b = static_cast<std::uint64_t>(tid); b < n_blocks; b += static_cast<std::uint64_t>(threads))
      blocks[b] = search_block(d, pool, d.has_intercept, lambda0, opts.count_intercept, b * block, (b + 1) * block);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool_threads;
    for (int t = 0; t < threads; ++t) pool_threads.emplace_back(work, t);
  }

  SubsetSearchResult res;
  std::vector<Candidate> per_size(static_cast<size_t>(p_search) + 1);
  for (const BlockResult& br : blocks) {
    res.models_evaluated += br.evaluated;
    res.rank_deficient_skipped += br.skipped;
    for (size_t k = 0; k < per_size.size(); ++k)
      if (better(br.per_size[k], per_size[k])) per_size[k] = br.per_size[k];
  }
  Candidate best;
  for (size_t k = 0; k < per_size.size(); ++k) {
    if (!per_size[k].valid) continue;
    res.per_size_best.push_back({static_cast<int>(k), per_size[k].support, per_size[k].criterion});
    if (better(per_size[k], best)) best = per_size[k];
  }
  if (!best.valid) throw SingularDesign("every candidate support was rank deficient");
  res.best_support = best.support;
  res.best_fit = fit_mle(d, best.support);
  const int k = static_cast<int>(best.support.size()) - ((d.has_intercept && !opts.count_intercept) ? 1 : 0);
  res.best_criterion = information_criterion(res.best_fit.loglik, k, lambda0);
  return res;
}

MleFit oracle_fit(const Dataset& d, const Support& true_support) { return fit_mle(d, true_support); }

MleFit full_mle(const Dataset& d) { return fit_mle(d, full_support(d.p())); }

Vector mle_standard_errors(const MleFit& fit) {
  const auto p = fit.beta_hat.size();
  Vector se = Vector::Zero(p);
  const auto k = static_cast<Eigen::Index>(fit.support.size());
  if (k == 0) return se;
  Matrix block(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) block(a, b) = fit.neg_hessian(fit.support[a], fit.support[b]);
  Eigen::LDLT<Matrix> ldlt(block);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw SingularDesign("observed information block is singular");
  const Matrix inv = ldlt.solve(Matrix::Identity(k, k));
  for (Eigen::Index a = 0; a < k; ++a) se[fit.support[a]] = std::sqrt(inv(a, a));
  return se;
}

}  // namespace mic
