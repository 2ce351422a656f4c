#include "mic/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "mic/baselines.hpp"
#include "mic/inference.hpp"

namespace mic {

std::string_view model_name(SimModel m) {
  switch (m) {
    case SimModel::A: return "A";
    case SimModel::B: return "B";
    case SimModel::C: return "C";
  }
  return "?";
}

SimModel parse_model(std::string_view s) {
  if (s == "A" || s == "a") return SimModel::A;
  if (s == "B" || s == "b") return SimModel::B;
  if (s == "C" || s == "c") return SimModel::C;
  throw InvalidInput("unknown model '" + std::string(s) + "' (expected A, B or C)");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MIC: return "MIC";
    case Method::BSS: return "BSS";
    case Method::Oracle: return "Oracle";
    case Method::Full: return "Full";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::MIC, Method::BSS, Method::Oracle, Method::Full})
    if (s == method_name(m)) return m;
  if (s == "mic") return Method::MIC;
  if (s == "bss") return Method::BSS;
  if (s == "oracle") return Method::Oracle;
  if (s == "full") return Method::Full;
  throw InvalidInput("unknown method '" + std::string(s) + "'");
}

Family model_family(SimModel m) {
  switch (m) {
    case SimModel::A: return Family::GaussianIdentity;
    case SimModel::B: return Family::BernoulliLogit;
    case SimModel::C: return Family::PoissonLog;
  }
  return Family::GaussianIdentity;
}

Vector default_beta0(SimModel m, int p) {
  Vector b = Vector::Zero(p);
  const bool c = m == SimModel::C;
  const double vals[3] = {c ? 1.2 : 3.0, c ? 0.6 : 1.5, c ? 0.8 : 2.0};
  const int idx[3] = {0, 1, 4};
  for (int k = 0; k < 3; ++k)
    if (idx[k] < p) b[idx[k]] = vals[k];
  return b;
}

SimDesign resolved(SimDesign d) {
  if (d.p < 1) throw InvalidInput("p must be positive");
  if (d.beta0.size() == 0) d.beta0 = default_beta0(d.model, d.p);
  if (d.beta0.size() != d.p) throw InvalidInput("beta0 length must equal p");
  if (!(d.rho >= 0.0 && d.rho < 1.0)) throw InvalidInput("rho must lie in [0, 1)");
  if (d.reps < 1) throw InvalidInput("reps must be at least 1");
  if (d.n <= d.p) throw InvalidInput("n must exceed p");
  if (d.test_n < 1) throw InvalidInput("test_n must be positive");
  if (!(d.alpha > 0.0 && d.alpha <= 1.0)) throw InvalidInput("alpha must lie in (0, 1]");
  if (d.methods.empty()) throw InvalidInput("at least one method is required");
  if (d.threads < 1) throw InvalidInput("threads must be positive");
  validate(d.mic);
  return d;
}

Support true_support(const SimDesign& d) {
  Support s;
  for (int j = 0; j < d.beta0.size(); ++j)
    if (d.beta0[j] != 0.0) s.push_back(j);
  return s;
}

Matrix ar_covariance(int p, double rho) {
  Matrix s(p, p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < p; ++k) s(j, k) = std::pow(rho, std::abs(j - k));
  return s;
}

namespace {

Vector draw_row(const Matrix& L, SimModel model, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(L.rows());
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = normal(rng);
  Vector x = L * z;
  if (model == SimModel::B)
    for (Eigen::Index j = 0; j < x.size(); j += 2) x[j] = x[j] < 0.0 ? 1.0 : 0.0;
  return x;
}

}  // namespace

Matrix gen_covariates(const SimDesign& d, int rows, Rng& rng) {
  const Matrix L = ar_covariance(d.p, d.rho).llt().matrixL();
  Matrix X(rows, d.p);
  for (int i = 0; i < rows; ++i) X.row(i) = draw_row(L, d.model, rng).transpose();
  return X;
}

Vector gen_response(const SimDesign& d, Matrix& X, Rng& rng, long* redraws) {
  const Vector beta0 = d.beta0.size() == d.p ? d.beta0 : default_beta0(d.model, d.p);
  Vector y(X.rows());
  Matrix L;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double eta = X.row(i).dot(beta0);
    switch (d.model) {
      case SimModel::A: {
        std::normal_distribution<double> normal;
        y[i] = eta + normal(rng);
        break;
      }
      case SimModel::B: {
        std::bernoulli_distribution coin(1.0 / (1.0 + std::exp(-eta)));
        y[i] = coin(rng) ? 1.0 : 0.0;
        break;
      }
      case SimModel::C: {
        while (std::exp(eta) > 1e6) {
          if (L.size() == 0) L = ar_covariance(d.p, d.rho).llt().matrixL();
          X.row(i) = draw_row(L, d.model, rng).transpose();
          eta = X.row(i).dot(beta0);
          if (redraws) ++*redraws;
        }
        std::poisson_distribution<long> pois(std::exp(eta));
        y[i] = static_cast<double>(pois(rng));
        break;
      }
    }
  }
  return y;
}

double model_error(const Vector& beta_hat, const Matrix& test_X, const SimDesign& d) {
  const Family fam = model_family(d.model);
  const Vector eta0 = test_X * d.beta0;
  const Vector eta1 = test_X * beta_hat;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta0.size(); ++i) {
    const double diff = mean_of_eta(fam, eta0[i]) - mean_of_eta(fam, eta1[i]);
    acc += diff * diff;
  }
  return acc / static_cast<double>(eta0.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double mad(std::vector<double> v) {
  const double m = median(v);
  for (double& x : v) x = std::abs(x - m);
  return 1.4826 * median(std::move(v));
}

const MethodSummary& SimReport::summary(Method m) const {
  for (const MethodSummary& s : methods)
    if (s.method == m) return s;
  throw InvalidInput("method " + std::string(method_name(m)) + " not in report");
}

namespace {

struct RepResult {
  std::vector<RepOutcome> per_method;
  long redraws = 0;
};

RepOutcome score_fit(const Vector& beta_hat, const Matrix& test_X, const SimDesign& d, const Support& truth) {
  RepOutcome o;
  o.beta_hat = beta_hat;
  o.me = model_error(beta_hat, test_X, d);
  for (int j = 0; j < d.p; ++j) {
    const bool nz_hat = beta_hat[j] != 0.0;
    const bool nz_true = d.beta0[j] != 0.0;
    o.size += nz_hat ? 1 : 0;
    o.fp += (nz_hat && !nz_true) ? 1 : 0;
    o.fn += (!nz_hat && nz_true) ? 1 : 0;
  }
  o.correct = o.fp == 0 && o.fn == 0;
  o.se_nonzero.assign(truth.size(), std::numeric_limits<double>::quiet_NaN());
  return o;
}

RepResult run_rep(const SimDesign& d, int rep) {
  RepResult out;
  const std::uint64_t seed = mix_seed(d.seed, static_cast<std::uint64_t>(rep));
  Rng rng(seed);
  Matrix X = gen_covariates(d, d.n, rng);
  Vector y = gen_response(d, X, rng, &out.redraws);
  Matrix test_X = gen_covariates(d, d.test_n, rng);
  if (d.model == SimModel::C) {
    // Test rows follow the same overflow guard; their responses are unused.
    gen_response(d, test_X, rng, &out.redraws);
  }
  const Dataset data = make_dataset(std::move(X), std::move(y), model_family(d.model), {},
                                    DatasetOptions{.standardize = false});
  const Support truth = true_support(d);

  for (Method m : d.methods) {
    RepOutcome o;
    try {
      switch (m) {
        case Method::MIC: {
          MicConfig cfg = d.mic;
          cfg.seed = seed;
          const MicFit fit = solve_mic(data, cfg);
          o = score_fit(fit.beta_tilde, test_X, d, truth);
          o.p_values = fit.inference_available ? fit.p_values : Vector::Constant(d.p, std::nan(""));
          const auto se = se_beta_nonzero(data, fit);
          for (size_t t = 0; t < truth.size(); ++t)
            if (auto it = se.find(truth[t]); it != se.end()) o.se_nonzero[t] = it->second;
          break;
        }
        case Method::BSS:
        case Method::Oracle:
        case Method::Full: {
          MleFit fit;
          if (m == Method::BSS) {
            SubsetSearchOptions so;
            so.count_intercept = d.mic.penalize_intercept;
            fit = best_subset(data, resolved_lambda0(d.mic, d.n), so).best_fit;
          } else if (m == Method::Oracle) {
            fit = oracle_fit(data, truth);
          } else {
            fit = full_mle(data);
          }
          if (!fit.converged) throw SingularDesign("MLE did not converge");
          o = score_fit(fit.beta_hat, test_X, d, truth);
          const Vector se = mle_standard_errors(fit);
          for (size_t t = 0; t < truth.size(); ++t)
            if (std::find(fit.support.begin(), fit.support.end(), truth[t]) != fit.support.end())
              o.se_nonzero[t] = se[truth[t]];
          break;
        }
      }
    } catch (const std::exception& e) {
      o = RepOutcome{};
      o.failed = true;
      o.failure = e.what();
    }
    o.rep = rep;
    o.seed = seed;
    out.per_method.push_back(std::move(o));
  }
  return out;
}

MethodSummary aggregate(Method m, std::vector<RepOutcome> reps, const SimDesign& d) {
  MethodSummary s;
  s.method = m;
  const Support truth = true_support(d);
  std::vector<int> reject(static_cast<size_t>(d.p), 0);
  int tested = 0;
  std::vector<std::vector<double>> est(truth.size()), ses(truth.size());
  for (const RepOutcome& o : reps) {
    if (o.failed) {
      ++s.reps_failed;
      s.failed_seeds.push_back(o.seed);
      continue;
    }
    ++s.reps_completed;
    s.me_mean += o.me;
    s.size_mean += o.size;
    s.fp_mean += o.fp;
    s.fn_mean += o.fn;
    s.c_rate += o.correct ? 1.0 : 0.0;
    if (m == Method::MIC && o.p_values.size() == d.p && o.p_values.allFinite()) {
      ++tested;
      for (int j = 0; j < d.p; ++j)
        if (o.p_values[j] <= d.alpha) ++reject[static_cast<size_t>(j)];
    }
    for (size_t t = 0; t < truth.size(); ++t) {
      est[t].push_back(o.beta_hat[truth[t]]);
      if (std::isfinite(o.se_nonzero[t])) ses[t].push_back(o.se_nonzero[t]);
    }
  }
  if (s.reps_completed > 0) {
    const double r = s.reps_completed;
    s.me_mean /= r;
    s.size_mean /= r;
    s.fp_mean /= r;
    s.fn_mean /= r;
    s.c_rate /= r;
  }
  if (m == Method::MIC && tested > 0) {
    for (int j = 0; j < d.p; ++j) s.rejection_rate.push_back(reject[static_cast<size_t>(j)] / static_cast<double>(tested));
  }
  for (size_t t = 0; t < truth.size(); ++t)
    s.se_calibration.push_back({truth[t], mad(est[t]), median(ses[t]), mad(ses[t])});
  s.reps = std::move(reps);
  return s;
}

}  // namespace

SimReport run_simulation(const SimDesign& design) {
  const SimDesign d = resolved(design);
  std::vector<RepResult> results(static_cast<size_t>(d.reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int rep = next.fetch_add(1); rep < d.reps; rep = next.fetch_add(1))
      results[static_cast<size_t>(rep)] = run_rep(d, rep);
  };
  const int threads = std::min(d.threads, d.reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SimReport report;
  report.design = d;
  for (size_t mi = 0; mi < d.methods.size(); ++mi) {
    std::vector<RepOutcome> reps;
    reps.reserve(results.size());
    for (const RepResult& r : results) reps.push_back(r.per_method[mi]);
    report.methods.push_back(aggregate(d.methods[mi], std::move(reps), d));
  }
  for (const RepResult& r : results) report.poisson_redraws += r.redraws;
  return report;
}

SizePower size_power_study(const SimDesign& design) {
  SimDesign d = design;
  d.methods = {Method::MIC};
  const SimReport r = run_simulation(d);
  SizePower out;
  out.rejection_rate = r.summary(Method::MIC).rejection_rate;
  for (int j = 0; j < r.design.p; ++j) {
    if (r.design.beta0[j] == 0.0) out.zero_indices.push_back(j);
    else out.nonzero_indices.push_back(j);
  }
  return out;
}

std::vector<double> default_a_grid() {
  std::vector<double> g{1.0};
  for (int a = 5; a <= 100; a += 5) g.push_back(a);
  return g;
}

ARobustness a_robustness_study(const Dataset& d, const std::vector<double>& a_grid, const MicConfig& base) {
  ARobustness out;
  std::map<Support, int> counts;
  for (double a : a_grid) {
    MicConfig cfg = base;
    cfg.a = a;
    const MicFit fit = solve_mic(d, cfg);
    out.points.push_back({a, fit.support, fit.beta_tilde, fit.gamma_tilde, a < 10.0 || a > 50.0});
    ++counts[fit.support];
  }
  int best = 0;
  for (const auto& [support, count] : counts) {
    if (count > best) {
      best = count;
      out.modal_support = support;
    }
  }
  out.stability = a_grid.empty() ? 0.0 : best / static_cast<double>(a_grid.size());
  return out;
}

}  // namespace mic
