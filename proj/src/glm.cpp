#include "mic/glm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mic {

namespace {

std::atomic<std::uint64_t> g_clamped{0};

double clamp_eta(double eta) {
  if (eta > kEtaClamp) {
    g_clamped.fetch_add(1, std::memory_order_relaxed);
    return kEtaClamp;
  }
  if (eta < -kEtaClamp) {
    g_clamped.fetch_add(1, std::memory_order_relaxed);
    return -kEtaClamp;
  }
  return eta;
}

// log(1 + e^x) without overflow
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double expit(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix columns(const Matrix& X, const Support& s) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(s.size()));
  for (size_t k = 0; k < s.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X.col(s[k]);
  return out;
}

void check_support(const Support& s, int p) {
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= p) throw InvalidInput("support index out of range");
    if (k > 0 && s[k] <= s[k - 1]) throw InvalidInput("support must be sorted and unique");
  }
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::GaussianIdentity: return "gaussian";
    case Family::BernoulliLogit: return "binomial";
    case Family::PoissonLog: return "poisson";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian" || name == "normal") return Family::GaussianIdentity;
  if (name == "binomial" || name == "bernoulli" || name == "logistic") return Family::BernoulliLogit;
  if (name == "poisson") return Family::PoissonLog;
  throw InvalidInput("unknown family '" + std::string(name) + "'");
}

std::uint64_t clamped_evaluations() { return g_clamped.load(std::memory_order_relaxed); }

void validate(const Dataset& d) {
  if (d.X.rows() != d.y.size()) throw InvalidInput("X and y have different numbers of rows");
  if (d.n() == 0) throw InvalidInput("dataset has no rows");
  if (!d.X.allFinite() || !d.y.allFinite()) throw InvalidInput("dataset contains non-finite entries");
  if (!d.column_names.empty() && static_cast<int>(d.column_names.size()) != d.p())
    throw InvalidInput("column_names size does not match number of columns");
  for (int i = 0; i < d.n(); ++i) {
    const double yi = d.y[i];
    if (d.family == Family::BernoulliLogit && yi != 0.0 && yi != 1.0) {
      std::ostringstream os;
      os << "binomial response must be 0/1; row " << i << " has " << yi;
      throw InvalidInput(os.str());
    }
    if (d.family == Family::PoissonLog && (yi < 0.0 || yi != std::floor(yi))) {
      std::ostringstream os;
      os << "poisson response must be a nonnegative integer; row " << i << " has " << yi;
      throw InvalidInput(os.str());
    }
  }
  if (d.has_intercept && (d.p() == 0 || !(d.X.col(0).array() == 1.0).all()))
    throw InvalidInput("intercept flag set but column 0 is not all ones");
}

Dataset make_dataset(Matrix X, Vector y, Family family, std::vector<std::string> column_names,
                     const DatasetOptions& opts) {
  if (column_names.empty()) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) column_names.push_back("x" + std::to_string(j + 1));
  }
  Dataset d;
  d.family = family;
  d.standardized = opts.standardize;
  const Eigen::Index n = X.rows();
  if (opts.standardize) {
    if (n < 2) throw InvalidInput("standardization needs at least two rows");
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double mean = X.col(j).mean();
      X.col(j).array() -= mean;
      const double sd = std::sqrt(X.col(j).squaredNorm() / static_cast<double>(n - 1));
      if (!(sd > 0.0)) throw InvalidInput("column '" + column_names[j] + "' is constant");
      X.col(j) /= sd;
    }
  }
  if (opts.standardize_response) {
    if (family != Family::GaussianIdentity) throw InvalidInput("only gaussian responses can be standardized");
    const double mean = y.mean();
    y.array() -= mean;
    const double sd = std::sqrt(y.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw InvalidInput("response is constant");
    y /= sd;
  }
  if (opts.add_intercept) {
    Matrix Xi(n, X.cols() + 1);
    Xi.col(0).setOnes();
    Xi.rightCols(X.cols()) = X;
    X = std::move(Xi);
    column_names.insert(column_names.begin(), "intercept");
  }
  d.X = std::move(X);
  d.y = std::move(y);
  d.has_intercept = opts.add_intercept;
  d.column_names = std::move(column_names);
  validate(d);
  return d;
}

Dataset replicate_rows(const Dataset& d, int times) {
  Dataset out = d;
  out.X.resize(d.n() * times, d.p());
  out.y.resize(d.n() * times);
  for (int t = 0; t < times; ++t) {
    out.X.middleRows(t * d.n(), d.n()) = d.X;
    out.y.segment(t * d.n(), d.n()) = d.y;
  }
  return out;
}

double mean_of_eta(Family f, double eta) {
  switch (f) {
    case Family::GaussianIdentity: return eta;
    case Family::BernoulliLogit: return expit(clamp_eta(eta));
    case Family::PoissonLog: return std::exp(clamp_eta(eta));
  }
  return eta;
}

double log_likelihood(const Dataset& d, const Vector& beta) {
  if (beta.size() != d.p()) throw InvalidInput("beta has wrong length");
  const double n = d.n();
  const Vector eta = d.X * beta;
  switch (d.family) {
    case Family::GaussianIdentity: {
      const double rss = (d.y - eta).squaredNorm();
      return -0.5 * n * std::log(rss / n) - 0.5 * n * (1.0 + std::log(2.0 * std::numbers::pi));
    }
    case Family::BernoulliLogit: {
      double l = 0.0;
      for (int i = 0; i < d.n(); ++i) {
        const double e = clamp_eta(eta[i]);
        l += d.y[i] * e - softplus(e);
      }
      return l;
    }
    case Family::PoissonLog: {
      double l = 0.0;
      for (int i = 0; i < d.n(); ++i) {
        const double e = clamp_eta(eta[i]);
        l += d.y[i] * e - std::exp(e) - std::lgamma(d.y[i] + 1.0);
      }
      return l;
    }
  }
  return 0.0;
}

Vector score(const Dataset& d, const Vector& beta) {
  if (beta.size() != d.p()) throw InvalidInput("beta has wrong length");
  const Vector eta = d.X * beta;
  if (d.family == Family::GaussianIdentity) {
    const Vector r = d.y - eta;
    return (static_cast<double>(d.n()) / r.squaredNorm()) * (d.X.transpose() * r);
  }
  Vector resid(d.n());
  for (int i = 0; i < d.n(); ++i) resid[i] = d.y[i] - mean_of_eta(d.family, eta[i]);
  return d.X.transpose() * resid;
}

Matrix neg_hessian(const Dataset& d, const Vector& beta) {
  if (beta.size() != d.p()) throw InvalidInput("beta has wrong length");
  const Vector eta = d.X * beta;
  if (d.family == Family::GaussianIdentity) {
    const double n = d.n();
    const Vector r = d.y - eta;
    const double rss = r.squaredNorm();
    const Vector xr = d.X.transpose() * r;
    Matrix h = (n / rss) * (d.X.transpose() * d.X);
    h.noalias() -= (2.0 * n / (rss * rss)) * (xr * xr.transpose());
    return h;
  }
  Vector w(d.n());
  for (int i = 0; i < d.n(); ++i) {
    const double m = mean_of_eta(d.family, eta[i]);
    w[i] = d.family == Family::BernoulliLogit ? m * (1.0 - m) : m;
  }
  Matrix h = d.X.transpose() * w.asDiagonal() * d.X;
  return 0.5 * (h + h.transpose());
}

Support full_support(int p) {
  Support s(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) s[static_cast<size_t>(j)] = j;
  return s;
}

MleFit fit_mle(const Dataset& d, const Support& support, const IrlsOptions& opts, const Vector* warm_start) {
  check_support(support, d.p());
  MleFit fit;
  fit.support = support;
  fit.beta_hat = Vector::Zero(d.p());
  const Matrix Xs = columns(d.X, support);
  const auto k = static_cast<Eigen::Index>(support.size());

  if (k > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(Xs);
    if (qr.rank() < k) {
      std::ostringstream os;
      os << "design restricted to support of size " << k << " has rank " << qr.rank();
      throw SingularDesign(os.str());
    }
    if (d.family == Family::GaussianIdentity) {
      const Vector b = qr.solve(d.y);
      for (Eigen::Index t = 0; t < k; ++t) fit.beta_hat[support[t]] = b[t];
      fit.iterations = 1;
      fit.converged = true;
    } else {
      Vector beta = Vector::Zero(d.p());
      if (warm_start != nullptr) {
        for (Eigen::Index t = 0; t < k; ++t) beta[support[t]] = (*warm_start)[support[t]];
      }
      double ll = log_likelihood(d, beta);
      if (!std::isfinite(ll)) {
        beta.setZero();
        ll = log_likelihood(d, beta);
      }
      for (int it = 0; it < opts.max_iter; ++it) {
        const Vector s_full = score(d, beta);
        Vector s(k);
        for (Eigen::Index t = 0; t < k; ++t) s[t] = s_full[support[t]];
        if (s.lpNorm<Eigen::Infinity>() < opts.tolerance) {
          fit.converged = true;
          fit.iterations = it;
          break;
        }
        const Matrix h_full = neg_hessian(d, beta);
        Matrix h(k, k);
        for (Eigen::Index a = 0; a < k; ++a)
          for (Eigen::Index b = 0; b < k; ++b) h(a, b) = h_full(support[a], support[b]);
        Eigen::LDLT<Matrix> ldlt(h);
        Vector step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
          step = ldlt.solve(s);
        } else {
          step = s;  // gradient ascent fallback on a flat direction
        }
        double t_len = 1.0;
        Vector cand = beta;
        double cand_ll = ll;
        for (int halving = 0; halving < 40; ++halving) {
          cand = beta;
          for (Eigen::Index t = 0; t < k; ++t) cand[support[t]] += t_len * step[t];
          cand_ll = log_likelihood(d, cand);
          if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-12 * std::abs(ll)) break;
          t_len *= 0.5;
        }
        beta = cand;
        ll = cand_ll;
        fit.iterations = it + 1;
      }
      fit.beta_hat = beta;
    }
  } else {
    fit.converged = true;
  }

  fit.loglik = log_likelihood(d, fit.beta_hat);
  fit.score_at_solution = score(d, fit.beta_hat);
  fit.neg_hessian = neg_hessian(d, fit.beta_hat);
  if (d.family != Family::GaussianIdentity && k > 0 && !fit.converged) {
    double worst = 0.0;
    for (int j : support) worst = std::max(worst, std::abs(fit.score_at_solution[j]));
    fit.converged = worst < opts.tolerance;
  }
  // Quasi-separation: the score vanishes only because fitted probabilities hit 0/1.
  if (d.family == Family::BernoulliLogit && k > 0 && (d.X * fit.beta_hat).cwiseAbs().maxCoeff() > 30.0)
    fit.converged = false;
  return fit;
}

double information_criterion(double loglik, int k, double lambda0) { return -2.0 * loglik + lambda0 * k; }

double information_criterion(const MleFit& fit, int /*n*/, int k, double lambda0) {
  return information_criterion(fit.loglik, k, lambda0);
}

}  // namespace mic
