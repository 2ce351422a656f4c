#include <doctest.h>

#include <cmath>

#include "diabetes.hpp"
#include "mic/baselines.hpp"
#include "mic/inference.hpp"
#include "mic/mic.hpp"
#include "support.hpp"

using namespace mic;
using mic::testing::column;
using mic::testing::random_dataset;

namespace {

// A fit whose coefficients are given directly.
MicFit fake_fit(const Vector& gamma, double a, const Vector& beta) {
  MicFit f;
  f.a = a;
  f.gamma_tilde = gamma;
  f.gamma_raw = gamma;
  f.beta_tilde = beta;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) f.support.push_back(static_cast<int>(j));
  return f;
}

}  // namespace

TEST_CASE("orthonormal gaussian design has equal closed-form SEs") {
  // Columns of a scaled Hadamard matrix: X^T X = n I.
  const int n = 8;
  Matrix X(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = ((i >> j) & 1) ? -1.0 : 1.0;
  Vector y(n);
  y << 0.3, -1.2, 2.0, 0.4, -0.7, 1.1, 0.9, -0.1;
  const Dataset d = make_dataset(X, y, Family::GaussianIdentity, {}, DatasetOptions{.standardize = false});
  REQUIRE((X.transpose() * X - n * Matrix::Identity(3, 3)).norm() < 1e-12);
  const Vector bhat = X.transpose() * y / n;
  CHECK((full_mle(d).beta_hat - bhat).norm() < 1e-12);
  const double rss = (y - X * bhat).squaredNorm();
  const Vector se = se_gamma(d, fake_fit(bhat, 10.0, bhat));
  for (int j = 0; j < 3; ++j) CHECK(se[j] == doctest::Approx(std::sqrt(rss) / n).epsilon(1e-12));
}

TEST_CASE("stacking the data twice shrinks SEs by sqrt 2") {
  const Dataset d = random_dataset(Family::BernoulliLogit, 100, 3, 2, true);
  const Dataset d2 = replicate_rows(d, 2);
  Vector b(4);
  b << 0.2, 0.5, 0.0, -0.4;
  const MicFit f = fake_fit(b, 10.0, b);
  const Vector s1 = se_gamma(d, f);
  const Vector s2 = se_gamma(d2, f);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(s2[j] - s1[j] / std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("wald test and intervals") {
  Vector g(3);
  g << 0.0, 0.5, -1.0;
  const MicFit f = fake_fit(g, 10.0, g);
  const Vector se = Vector::Constant(3, 0.25);
  const WaldResult w = wald_test(f, se);
  CHECK(w.p_values[0] == 1.0);
  CHECK(w.z[1] == doctest::Approx(2.0));
  CHECK(w.p_values[1] == doctest::Approx(0.0455002638963584).epsilon(1e-10));
  CHECK(w.p_values[2] == doctest::Approx(two_sided_p_value(-4.0)));
  CHECK(two_sided_p_value(1.0) > two_sided_p_value(2.0));
  const auto [lo, hi] = confidence_interval(f, se, 0.05);
  CHECK((hi - g)[1] == doctest::Approx(1.959964 * 0.25).epsilon(1e-6));
  CHECK((lo.array() < hi.array()).all());
  const auto [lo2, hi2] = confidence_interval(f, se, 1.0 - 1e-12);
  CHECK((hi2 - lo2).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK_THROWS_AS(wald_test(f, Vector::Zero(3)), InvalidInput);
  CHECK_THROWS_AS(confidence_interval(f, se, 1.5), InvalidInput);
}

TEST_CASE("single predictor gaussian SE on the nonzero block") {
  const Dataset d = random_dataset(Family::GaussianIdentity, 50, 1, 4);
  const MleFit m = full_mle(d);
  const MicFit f = fake_fit(m.beta_hat, 10.0, m.beta_hat);
  const auto se = se_beta_nonzero(d, f);
  const double rss = (d.y - d.X * m.beta_hat).squaredNorm();
  REQUIRE(se.count(0) == 1);
  CHECK(se.at(0) == doctest::Approx(std::sqrt((rss / 50.0) / d.X.col(0).squaredNorm())).epsilon(1e-12));
}

TEST_CASE("nonzero block SEs equal full-model SEs without zeros") {
  const Dataset d = random_dataset(Family::PoissonLog, 80, 3, 5);
  const MleFit m = full_mle(d);
  const auto se = se_beta_nonzero(d, fake_fit(m.beta_hat, 10.0, m.beta_hat));
  const Vector ref = mle_standard_errors(m);
  for (int j = 0; j < 3; ++j) CHECK(se.at(j) == doctest::Approx(ref[j]).epsilon(1e-10));
}

TEST_CASE("report keys nonzero SEs by support only") {
  const Dataset d = random_dataset(Family::GaussianIdentity, 60, 4, 6);
  Vector b(4);
  b << 0.4, 0.0, -0.3, 0.0;
  const InferenceReport r = make_inference_report(d, fake_fit(b, 10.0, b));
  CHECK(r.se_beta_nonzero.size() == 2);
  CHECK(r.se_beta_nonzero.count(0) == 1);
  CHECK(r.se_beta_nonzero.count(1) == 0);
  CHECK((r.p_values.array() >= 0.0).all());
  CHECK((r.p_values.array() <= 1.0).all());
}

TEST_CASE("singular information names a column") {
  Matrix X = Matrix::Random(20, 2);
  X.col(1) = X.col(0);
  const Dataset d = make_dataset(X, Vector::Random(20), Family::GaussianIdentity, {"u", "v"},
                                 DatasetOptions{.standardize = false});
  Vector b = Vector::Zero(2);
  b[0] = 0.1;
  try {
    se_gamma(d, fake_fit(b, 10.0, b));
    FAIL("expected SingularDesign");
  } catch (const SingularDesign& e) {
    const std::string msg = e.what();
    CHECK((msg.find("'u'") != std::string::npos || msg.find("'v'") != std::string::npos));
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("diabetes full-model and MIC standard errors") {
  const Dataset d = mic::testing::diabetes();
  const int bmi = column(d, "bmi");
  const MleFit full = full_mle(d);
  CHECK(full.beta_hat[bmi] == doctest::Approx(0.321).epsilon(0.002 / 0.321));
  CHECK(std::abs(mle_standard_errors(full)[bmi] - 0.041) < 0.001);
  MicConfig c;
  c.seed = 1;
  const MicFit fit = solve_mic(d, c);
  const InferenceReport r = make_inference_report(d, fit);
  CHECK(std::abs(r.se_gamma[bmi] - 0.041) < 0.005);
  CHECK(std::abs(r.se_beta_nonzero.at(bmi) - 0.040) < 0.005);
  CHECK(r.p_values[bmi] < 0.001);
  CHECK(r.p_values[column(d, "age")] == 1.0);
}
