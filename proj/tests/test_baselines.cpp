#include <doctest.h>

#include <cmath>

#include "diabetes.hpp"
#include "mic/baselines.hpp"
#include "support.hpp"

using namespace mic;
using mic::testing::random_dataset;

namespace {

// Brute force over bitmasks with cold fits only.
std::pair<Support, double> brute_force(const Dataset& d, double lambda0) {
  const int p = d.p();
  Support best;
  double crit = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << p); ++mask) {
    Support s;
    for (int j = 0; j < p; ++j)
      if (mask & (1 << j)) s.push_back(j);
    const double c = information_criterion(fit_mle(d, s).loglik, static_cast<int>(s.size()), lambda0);
    if (c < crit - 1e-12 || (std::abs(c - crit) <= 1e-12 && s < best)) {
      crit = c;
      best = s;
    }
  }
  return {best, crit};
}

}  // namespace

TEST_CASE("two-predictor toy against hand enumeration") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix X(60, 2);
  Vector y(60);
  for (int i = 0; i < 60; ++i) {
    X(i, 0) = z(rng);
    X(i, 1) = z(rng);
    y[i] = 2.0 * X(i, 0) + 0.5 * z(rng);
  }
  const Dataset d = make_dataset(X, y, Family::GaussianIdentity);
  const double ln = std::log(60.0);
  double crit[4];
  const Support sets[4] = {{}, {0}, {1}, {0, 1}};
  for (int k = 0; k < 4; ++k) {
    const Vector b = fit_mle(d, sets[k]).beta_hat;
    const double rss = (d.y - d.X * b).squaredNorm();
    crit[k] = 60.0 * std::log(rss / 60.0) + 60.0 * (1.0 + std::log(2.0 * M_PI)) + ln * sets[k].size();
  }
  const int arg = static_cast<int>(std::min_element(crit, crit + 4) - crit);
  CHECK(arg == 1);
  const SubsetSearchResult r = best_subset(d, ln);
  CHECK(r.best_support == Support{0});
  CHECK(r.best_criterion == doctest::Approx(crit[1]).epsilon(1e-12));
  CHECK(r.models_evaluated == 4);
}

TEST_CASE("matches brute force for every family") {
  for (Family fam : {Family::GaussianIdentity, Family::BernoulliLogit, Family::PoissonLog}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Dataset d = random_dataset(fam, 90, 6, 40 + seed);
      const auto [s, c] = brute_force(d, std::log(90.0));
      const SubsetSearchResult r = best_subset(d, std::log(90.0));
      CHECK(r.best_support == s);
      CHECK(r.best_criterion == doctest::Approx(c).epsilon(1e-9));
      CHECK(r.models_evaluated + r.rank_deficient_skipped == 64);
      double min_size = std::numeric_limits<double>::infinity();
      for (const SizeBest& sb : r.per_size_best) min_size = std::min(min_size, sb.criterion);
      CHECK(min_size == doctest::Approx(r.best_criterion).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero penalty picks the full model") {
  const Dataset d = random_dataset(Family::BernoulliLogit, 80, 4, 3);
  CHECK(best_subset(d, 0.0).best_support == full_support(4));
}

TEST_CASE("column permutation permutes the support") {
  const Dataset d = random_dataset(Family::GaussianIdentity, 100, 5, 4);
  const std::vector<int> perm{3, 0, 4, 1, 2};
  Matrix Xp(d.n(), d.p());
  for (int j = 0; j < d.p(); ++j) Xp.col(j) = d.X.col(perm[static_cast<size_t>(j)]);
  const Dataset dp = make_dataset(Xp, d.y, d.family, {}, DatasetOptions{.standardize = false});
  const Support s = best_subset(d, std::log(100.0)).best_support;
  Support mapped;
  for (int j : best_subset(dp, std::log(100.0)).best_support) mapped.push_back(perm[static_cast<size_t>(j)]);
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == s);
}

TEST_CASE("adding a noise column never raises the best criterion") {
  const Dataset d = random_dataset(Family::PoissonLog, 100, 4, 5);
  Matrix X2(d.n(), 5);
  X2.leftCols(4) = d.X;
  X2.col(4) = Vector::Random(d.n());
  const Dataset d2 = make_dataset(X2, d.y, d.family, {}, DatasetOptions{.standardize = false});
  CHECK(best_subset(d2, std::log(100.0)).best_criterion <= best_subset(d, std::log(100.0)).best_criterion + 1e-9);
}

TEST_CASE("thread count does not change the result") {
  const Dataset d = random_dataset(Family::BernoulliLogit, 120, 10, 6, true);
  SubsetSearchOptions o1, o4;
  o4.threads = 4;
  const SubsetSearchResult a = best_subset(d, std::log(120.0), o1);
  const SubsetSearchResult b = best_subset(d, std::log(120.0), o4);
  CHECK(a.best_support == b.best_support);
  CHECK(a.best_criterion == b.best_criterion);
  CHECK(a.models_evaluated == b.models_evaluated);
  REQUIRE(a.per_size_best.size() == b.per_size_best.size());
  for (size_t k = 0; k < a.per_size_best.size(); ++k) {
    CHECK(a.per_size_best[k].support == b.per_size_best[k].support);
    CHECK(a.per_size_best[k].criterion == b.per_size_best[k].criterion);
  }
}

TEST_CASE("intercept is always included and optionally counted") {
  const Dataset d = random_dataset(Family::BernoulliLogit, 80, 3, 7, true);
  SubsetSearchOptions counted, free;
  free.count_intercept = false;
  const SubsetSearchResult a = best_subset(d, std::log(80.0), counted);
  const SubsetSearchResult b = best_subset(d, std::log(80.0), free);
  CHECK(a.best_support.front() == 0);
  CHECK(a.models_evaluated == 8);
  CHECK(a.best_support == b.best_support);
  CHECK(a.best_criterion == doctest::Approx(b.best_criterion + std::log(80.0)));
}

TEST_CASE("search size guard") {
  const Dataset d = random_dataset(Family::GaussianIdentity, 40, 6, 8);
  SubsetSearchOptions o;
  o.max_p = 5;
  CHECK_THROWS_AS(best_subset(d, 1.0, o), InvalidInput);
}

TEST_CASE("rank deficient supports are skipped and counted") {
  Matrix X = Matrix::Random(30, 3);
  X.col(2) = X.col(0) + X.col(1);
  const Dataset d = make_dataset(X, Vector::Random(30), Family::GaussianIdentity, {},
                                 DatasetOptions{.standardize = false});
  const SubsetSearchResult r = best_subset(d, std::log(30.0));
  CHECK(r.rank_deficient_skipped == 1);
  CHECK(r.models_evaluated == 7);
}

TEST_CASE("oracle and full fits") {
  const Dataset d = random_dataset(Family::PoissonLog, 60, 3, 9);
  CHECK(oracle_fit(d, full_support(3)).beta_hat == full_mle(d).beta_hat);
  CHECK(oracle_fit(d, {}).beta_hat.isZero());
}

TEST_CASE("diabetes best subset") {
  const Dataset d = mic::testing::diabetes();
  const SubsetSearchResult r = best_subset(d, std::log(442.0));
  std::vector<std::string> names;
  for (int j : r.best_support) names.push_back(d.column_names[static_cast<size_t>(j)]);
  CHECK(names == std::vector<std::string>{"sex", "bmi", "map", "hdl", "ltg"});
  // Published value additionally counts the error variance as a parameter.
  CHECK(std::abs(r.best_criterion + std::log(442.0) - 975.82) < 0.01);
  const MleFit full = full_mle(d);
  CHECK(std::abs(full.beta_hat[2] - 0.321) < 0.002);
}
