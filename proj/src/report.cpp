#include "mic/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mic/csv.hpp"

namespace mic {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json names_of(const Dataset& d, const Support& s) {
  json out = json::array();
  for (int j : s) out.push_back(d.column_names[static_cast<size_t>(j)]);
  return out;
}

std::string fixed(const json& v, int digits = 3) {
  if (v.is_null()) return "";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v.get<double>();
  return os.str();
}

}  // namespace

json mle_block(const Dataset& d, const MleFit& fit, double bic) {
  Vector se = Vector::Constant(d.p(), std::nan(""));
  try {
    se = mle_standard_errors(fit);
  } catch (const SingularDesign&) {
  }
  json coefs = json::array();
  for (int j : fit.support)
    coefs.push_back({{"name", d.column_names[static_cast<size_t>(j)]}, {"beta", number(fit.beta_hat[j])}, {"se", number(se[j])}});
  return {{"support", names_of(d, fit.support)},
          {"coefficients", coefs},
          {"loglik", number(fit.loglik)},
          {"bic", number(bic)},
          {"converged", fit.converged},
          {"iterations", fit.iterations}};
}

json mic_block(const Dataset& d, const MicFit& fit, const InferenceReport& inf) {
  json coefs = json::array();
  for (int j = 0; j < d.p(); ++j) {
    json c = {{"name", d.column_names[static_cast<size_t>(j)]},
              {"gamma", number(fit.gamma_tilde[j])},
              {"se_gamma", number(inf.se_gamma.size() ? inf.se_gamma[j] : std::nan(""))},
              {"p_value", number(inf.p_values.size() ? inf.p_values[j] : std::nan(""))},
              {"ci_lower", number(inf.ci_lower.size() ? inf.ci_lower[j] : std::nan(""))},
              {"ci_upper", number(inf.ci_upper.size() ? inf.ci_upper[j] : std::nan(""))}};
    if (auto it = inf.se_beta_nonzero.find(j); it != inf.se_beta_nonzero.end()) {
      c["beta"] = number(fit.beta_tilde[j]);
      c["se_beta"] = number(it->second);
    } else {
      c["beta"] = number(fit.beta_tilde[j]);
      c["se_beta"] = nullptr;
    }
    coefs.push_back(std::move(c));
  }
  json raw = json::array();
  for (int j = 0; j < d.p(); ++j) raw.push_back(number(fit.gamma_raw[j]));
  return {{"support", names_of(d, fit.support)},
          {"coefficients", coefs},
          {"gamma_raw", raw},
          {"objective", number(fit.objective)},
          {"bic", number(fit.bic_equivalent)},
          {"a", fit.a},
          {"lambda0", fit.lambda0},
          {"alpha", inf.alpha},
          {"refitted", fit.refitted},
          {"converged", fit.converged},
          {"best_start_id", fit.best_start_id},
          {"n_objective_evals", fit.n_objective_evals},
          {"warnings", fit.warnings}};
}

json best_subset_block(const Dataset& d, const SubsetSearchResult& r, double lambda0) {
  json block = mle_block(d, r.best_fit, r.best_criterion);
  json sizes = json::array();
  for (const auto& s : r.per_size_best)
    sizes.push_back({{"size", s.size}, {"support", names_of(d, s.support)}, {"criterion", number(s.criterion)}});
  block["lambda0"] = lambda0;
  block["per_size_best"] = sizes;
  block["models_evaluated"] = r.models_evaluated;
  block["rank_deficient_skipped"] = r.rank_deficient_skipped;
  return block;
}

json simulation_json(const SimReport& r, bool include_reps) {
  const SimDesign& d = r.design;
  json beta0 = json::array();
  for (int j = 0; j < d.p; ++j) beta0.push_back(d.beta0[j]);
  json methods = json::array();
  json method_names = json::array();
  for (Method m : d.methods) method_names.push_back(std::string(method_name(m)));
  for (const MethodSummary& s : r.methods) {
    json cal = json::array();
    for (const auto& c : s.se_calibration)
      cal.push_back({{"coefficient", c.index + 1},
                     {"mad_estimates", number(c.mad_estimates)},
                     {"median_se", number(c.median_se)},
                     {"mad_se", number(c.mad_se)}});
    json m = {{"method", std::string(method_name(s.method))},
              {"ME", number(s.me_mean)},
              {"Size", number(s.size_mean)},
              {"FP", number(s.fp_mean)},
              {"FN", number(s.fn_mean)},
              {"C", number(s.c_rate)},
              {"reps_completed", s.reps_completed},
              {"reps_failed", s.reps_failed},
              {"failed_seeds", s.failed_seeds},
              {"se_calibration", cal}};
    if (!s.rejection_rate.empty()) {
      json rr = json::array();
      for (int j = 0; j < d.p; ++j)
        rr.push_back({{"coefficient", j + 1},
                      {"true_zero", d.beta0[j] == 0.0},
                      {"rejection_rate", s.rejection_rate[static_cast<size_t>(j)]}});
      m["rejection_rates"] = rr;
    }
    if (include_reps) {
      json reps = json::array();
      for (const RepOutcome& o : s.reps)
        reps.push_back({{"rep", o.rep}, {"seed", o.seed}, {"failed", o.failed}, {"ME", number(o.me)},
                        {"Size", o.size}, {"FP", o.fp}, {"FN", o.fn}, {"correct", o.correct}});
      m["reps"] = reps;
    }
    methods.push_back(std::move(m));
  }
  return {{"schema_version", kSchemaVersion},
          {"command", "simulate"},
          {"design",
           {{"model", std::string(model_name(d.model))},
            {"n", d.n},
            {"p", d.p},
            {"beta0", beta0},
            {"rho", d.rho},
            {"reps", d.reps},
            {"test_n", d.test_n},
            {"alpha", d.alpha},
            {"methods", method_names},
            {"seed", d.seed},
            {"a", d.mic.a},
            {"lambda0", d.mic.lambda0 ? json(*d.mic.lambda0) : json("ln(n)")}}},
          {"methods", methods},
          {"poisson_redraws", r.poisson_redraws}};
}

json sweep_json(const Dataset& d, const ARobustness& r) {
  json grid = json::array();
  json traj = json::object();
  for (int j = 0; j < d.p(); ++j) {
    json gam = json::array();
    json bet = json::array();
    for (const auto& pt : r.points) {
      gam.push_back(number(pt.gamma_tilde[j]));
      bet.push_back(number(pt.beta_tilde[j]));
    }
    traj[d.column_names[static_cast<size_t>(j)]] = {{"gamma", gam}, {"beta", bet}};
  }
  json points = json::array();
  for (const auto& pt : r.points) {
    grid.push_back(pt.a);
    points.push_back({{"a", pt.a}, {"support", names_of(d, pt.support)}, {"flagged", pt.flagged}});
  }
  return {{"schema_version", kSchemaVersion},
          {"command", "sweep-a"},
          {"a_grid", grid},
          {"points", points},
          {"trajectories", traj},
          {"modal_support", names_of(d, r.modal_support)},
          {"stability", r.stability}};
}

std::string fit_table(const json& report) {
  std::ostringstream os;
  const json& methods = report.at("methods");
  for (auto it = methods.begin(); it != methods.end(); ++it) {
    const json& m = it.value();
    os << "== " << it.key() << " ==\n";
    if (it.key() == "mic") {
      os << std::left << std::setw(14) << "coef" << std::right << std::setw(10) << "gamma" << std::setw(10) << "SE"
         << std::setw(10) << "P-Value" << std::setw(10) << "beta" << std::setw(10) << "SE" << '\n';
      for (const json& c : m.at("coefficients"))
        os << std::left << std::setw(14) << c.at("name").get<std::string>() << std::right << std::setw(10)
           << fixed(c.at("gamma")) << std::setw(10) << fixed(c.at("se_gamma")) << std::setw(10) << fixed(c.at("p_value"))
           << std::setw(10) << (c.at("se_beta").is_null() ? "" : fixed(c.at("beta"))) << std::setw(10)
           << fixed(c.at("se_beta")) << '\n';
    } else {
      os << std::left << std::setw(14) << "coef" << std::right << std::setw(10) << "beta" << std::setw(10) << "SE" << '\n';
      for (const json& c : m.at("coefficients"))
        os << std::left << std::setw(14) << c.at("name").get<std::string>() << std::right << std::setw(10)
           << fixed(c.at("beta")) << std::setw(10) << fixed(c.at("se")) << '\n';
    }
    os << std::left << std::setw(14) << "BIC" << std::right << std::setw(10) << fixed(m.at("bic"), 2) << "\n\n";
  }
  return os.str();
}

std::string simulation_table(const SimReport& r) {
  std::ostringstream os;
  os << "Model " << model_name(r.design.model) << ", n = " << r.design.n << ", reps = " << r.design.reps << '\n';
  os << std::left << std::setw(8) << "Method" << std::right << std::setw(10) << "ME" << std::setw(8) << "Size"
     << std::setw(8) << "FP" << std::setw(8) << "FN" << std::setw(8) << "C" << '\n';
  for (const MethodSummary& s : r.methods) {
    os << std::left << std::setw(8) << method_name(s.method) << std::right << std::fixed << std::setprecision(3)
       << std::setw(10) << s.me_mean << std::setprecision(2) << std::setw(8) << s.size_mean << std::setw(8)
       << s.fp_mean << std::setw(8) << s.fn_mean << std::setprecision(3) << std::setw(8) << s.c_rate << '\n';
  }
  return os.str();
}

std::string sweep_table(const json& report) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "a" << "support\n";
  for (const json& pt : report.at("points")) {
    os << std::left << std::setw(8) << pt.at("a").get<double>();
    std::string sep;
    for (const json& s : pt.at("support")) {
      os << sep << s.get<std::string>();
      sep = ",";
    }
    os << '\n';
  }
  os << "stability " << std::fixed << std::setprecision(3) << report.at("stability").get<double>() << '\n';
  return os.str();
}

std::string sweep_csv(const Dataset& d, const ARobustness& r) {
  CsvTable t;
  t.header = {"coefficient", "a", "gamma", "beta"};
  for (int j = 0; j < d.p(); ++j)
    for (const auto& pt : r.points)
      t.rows.push_back({d.column_names[static_cast<size_t>(j)], format_number(pt.a), format_number(pt.gamma_tilde[j]),
                        format_number(pt.beta_tilde[j])});
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("failed writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace mic
