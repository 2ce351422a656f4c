#include "mic/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mic/csv.hpp"

namespace mic {

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.output_path.empty()) out << content;
  else write_file_atomic(cfg.output_path, content);
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

Dataset load_dataset(const RunConfig& cfg) {
  const Family family = parse_family(cfg.family);
  IngestOptions io;
  io.response = cfg.response_column;
  io.predictors = split_list(cfg.predictors);
  io.interactions = cfg.interactions;
  io.family = family;
  io.add_intercept = cfg.intercept.value_or(family != Family::GaussianIdentity);
  io.standardize = true;
  io.standardize_response = family == Family::GaussianIdentity && !cfg.raw_response;
  return ingest(read_csv(cfg.input_path), io);
}

MicConfig mic_config(const RunConfig& cfg) {
  MicConfig m;
  m.a = cfg.a;
  m.lambda0 = parse_lambda0(cfg.lambda0);
  m.penalize_intercept = cfg.penalize_intercept;
  m.refit_on_support = cfg.refit;
  m.seed = cfg.seed;
  return m;
}

json dataset_header(const RunConfig& cfg, const Dataset& d) {
  return {{"schema_version", kSchemaVersion},
          {"command", cfg.command},
          {"input", cfg.input_path},
          {"response", cfg.response_column},
          {"family", std::string(family_name(d.family))},
          {"n", d.n()},
          {"p", d.p()},
          {"columns", d.column_names},
          {"intercept", d.has_intercept},
          {"seed", cfg.seed}};
}

// Runs `body`, translating exceptions into the documented exit codes.
template <class F>
int guarded(std::ostream& err, int fit_code, F&& body) {
  try {
    return body();
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadCsv;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return fit_code;
  }
}

}  // namespace

std::optional<double> parse_lambda0(const std::string& s) {
  if (s == "bic") return std::nullopt;
  if (s == "aic") return 2.0;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !(v >= 0.0)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("lambda0 must be 'bic', 'aic' or a nonnegative number, got '" + s + "'");
  }
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset d;
  if (int rc = guarded(err, kExitBadCsv, [&] { d = load_dataset(cfg); return 0; }); rc) return rc;
  return guarded(err, kExitFitFailed, [&] {
    const MicConfig mc = mic_config(cfg);
    const double lambda0 = resolved_lambda0(mc, d.n());
    std::vector<std::string> methods = split_list(cfg.methods);
    if (methods.empty()) methods = {"full", "bss", "mic"};
    json report = dataset_header(cfg, d);
    report["lambda0"] = lambda0;
    json blocks = json::object();
    const bool count_intercept = cfg.penalize_intercept;
    for (const auto& m : methods) {
      if (m == "full") {
        const MleFit fit = full_mle(d);
        const int k = d.p() - ((d.has_intercept && !count_intercept) ? 1 : 0);
        blocks["full"] = mle_block(d, fit, information_criterion(fit.loglik, k, lambda0));
      } else if (m == "bss") {
        SubsetSearchOptions so;
        so.count_intercept = count_intercept;
        so.threads = cfg.threads;
        blocks["best_subset"] = best_subset_block(d, best_subset(d, lambda0, so), lambda0);
      } else if (m == "mic") {
        const MicFit fit = solve_mic(d, mc);
        blocks["mic"] = mic_block(d, fit, make_inference_report(d, fit, cfg.alpha));
      } else {
        throw InvalidInput("unknown fit method '" + m + "' (expected full, bss, mic)");
      }
    }
    report["methods"] = blocks;
    emit(cfg, cfg.format == "table" ? fit_table(report) : render(report), out);
    return int{kExitOk};
  });
}

SimDesign design_from_json(const json& j, SimDesign d) {
  try {
    if (j.contains("model")) d.model = parse_model(j.at("model").get<std::string>());
    if (j.contains("n")) d.n = j.at("n").get<int>();
    if (j.contains("p")) d.p = j.at("p").get<int>();
    if (j.contains("beta0")) {
      const auto v = j.at("beta0").get<std::vector<double>>();
      d.beta0 = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    if (j.contains("rho")) d.rho = j.at("rho").get<double>();
    if (j.contains("reps")) d.reps = j.at("reps").get<int>();
    if (j.contains("test_n")) d.test_n = j.at("test_n").get<int>();
    if (j.contains("alpha")) d.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) d.threads = j.at("threads").get<int>();
    if (j.contains("a")) d.mic.a = j.at("a").get<double>();
    if (j.contains("lambda0")) {
      const json& l = j.at("lambda0");
      d.mic.lambda0 = l.is_string() ? parse_lambda0(l.get<std::string>()) : std::optional<double>(l.get<double>());
    }
    if (j.contains("methods")) {
      d.methods.clear();
      for (const auto& m : j.at("methods")) d.methods.push_back(parse_method(m.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("invalid design file: ") + e.what());
  }
  return d;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, kExitBadDesign, [&]() -> int {
    SimDesign d;
    d.model = parse_model(cfg.model);
    d.n = cfg.n;
    d.p = cfg.p;
    d.reps = cfg.reps;
    d.test_n = cfg.test_n;
    d.alpha = cfg.alpha;
    d.seed = cfg.seed;
    d.threads = cfg.threads;
    d.mic = mic_config(cfg);
    if (!cfg.methods.empty()) {
      d.methods.clear();
      for (const auto& m : split_list(cfg.methods)) d.methods.push_back(parse_method(m));
    }
    if (!cfg.design_config.empty()) {
      std::ifstream in(cfg.design_config);
      if (!in) throw InvalidInput("cannot open design file '" + cfg.design_config + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw InvalidInput(std::string("invalid design file: ") + e.what());
      }
      d = design_from_json(j, d);
    }
    d = resolved(d);
    SimReport r;
    try {
      r = run_simulation(d);
    } catch (const InvalidInput&) {
      throw;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFitFailed;
    }
    emit(cfg, cfg.format == "table" ? simulation_table(r) : render(simulation_json(r, cfg.include_reps)), out);
    return kExitOk;
  });
}

int cmd_sweep_a(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset d;
  if (int rc = guarded(err, kExitBadCsv, [&] { d = load_dataset(cfg); return 0; }); rc) return rc;
  return guarded(err, kExitFitFailed, [&] {
    const std::vector<double> grid = cfg.a_grid.empty() ? default_a_grid() : cfg.a_grid;
    const ARobustness r = a_robustness_study(d, grid, mic_config(cfg));
    json report = dataset_header(cfg, d);
    const json sweep = sweep_json(d, r);
    for (auto it = sweep.begin(); it != sweep.end(); ++it)
      if (it.key() != "schema_version" && it.key() != "command") report[it.key()] = it.value();
    std::string body;
    if (cfg.format == "table") body = sweep_table(report);
    else if (cfg.format == "csv") body = sweep_csv(d, r);
    else body = render(report);
    if (!cfg.trajectory_csv.empty()) write_file_atomic(cfg.trajectory_csv, sweep_csv(d, r));
    emit(cfg, body, out);
    return int{kExitOk};
  });
}

int cmd_best_subset(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset d;
  if (int rc = guarded(err, kExitBadCsv, [&] { d = load_dataset(cfg); return 0; }); rc) return rc;
  return guarded(err, kExitFitFailed, [&] {
    const double lambda0 = resolved_lambda0(mic_config(cfg), d.n());
    SubsetSearchOptions so;
    so.max_p = cfg.max_p;
    so.count_intercept = cfg.penalize_intercept;
    so.threads = cfg.threads;
    json report = dataset_header(cfg, d);
    report["lambda0"] = lambda0;
    report["methods"] = {{"best_subset", best_subset_block(d, best_subset(d, lambda0, so), lambda0)}};
    emit(cfg, cfg.format == "table" ? fit_table(report) : render(report), out);
    return int{kExitOk};
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse GLM estimation by minimizing an approximated information criterion"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  bool intercept = false;
  bool no_intercept = false;
  bool full_protocol = false;
  bool no_penalize_intercept = false;

  auto data_opts = [&](CLI::App* sub) {
    sub->add_option("input,--input", cfg.input_path, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    sub->add_option("--response", cfg.response_column, "Response column")->required();
    sub->add_option("--family", cfg.family, "gaussian | binomial | poisson")
        ->check(CLI::IsMember({"gaussian", "binomial", "poisson"}));
    sub->add_option("--predictors", cfg.predictors, "Comma-separated predictor columns (default: all others)");
    sub->add_option("--interaction", cfg.interactions, "Product column a:b, built before standardization");
    sub->add_flag("--intercept", intercept, "Add an intercept column");
    sub->add_flag("--no-intercept", no_intercept, "Do not add an intercept column");
    sub->add_flag("--raw-response", cfg.raw_response, "Do not standardize a gaussian response");
  };
  auto mic_opts = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "Sharpness of the tanh dent")->check(CLI::Range(1.0, 1000.0));
    sub->add_option("--lambda0", cfg.lambda0, "bic | aic | <number>");
    sub->add_option("--seed", seed, "Random seed (falls back to MIC_SEED)");
    sub->add_option("--threads", cfg.threads, "Worker threads; never changes results")->check(CLI::PositiveNumber);
    sub->add_flag("--no-penalize-intercept", no_penalize_intercept, "Leave the intercept unpenalized");
    sub->add_flag("--refit", cfg.refit, "Replace MIC coefficients by the MLE on the selected support");
    sub->add_option("--output", cfg.output_path, "Report file (default: stdout)");
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit full, best-subset and MIC models to a CSV dataset");
  data_opts(fit);
  mic_opts(fit);
  fit->add_option("--methods", cfg.methods, "Comma-separated subset of full,bss,mic");
  fit->add_option("--alpha", cfg.alpha, "Confidence level complement")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "table"}));

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo study on models A, B or C");
  mic_opts(sim);
  sim->add_option("--model", cfg.model)->check(CLI::IsMember({"A", "B", "C"}));
  sim->add_option("--n", cfg.n);
  sim->add_option("--p", cfg.p);
  sim->add_option("--reps", cfg.reps);
  sim->add_option("--test-n", cfg.test_n);
  sim->add_option("--alpha", cfg.alpha);
  sim->add_option("--methods", cfg.methods, "Comma-separated subset of MIC,BSS,Oracle,Full");
  sim->add_option("--config", cfg.design_config, "JSON design file");
  sim->add_flag("--full-protocol", full_protocol, "Run 500 replications");
  sim->add_flag("--include-reps", cfg.include_reps, "Include per-replication rows in the JSON report");
  sim->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "table"}));

  CLI::App* sweep = app.add_subcommand("sweep-a", "Coefficient trajectories over a grid of a values");
  data_opts(sweep);
  mic_opts(sweep);
  sweep->add_option("--grid", cfg.a_grid, "a values (default 1,5,10,...,100)")->delimiter(',');
  sweep->add_option("--trajectory-csv", cfg.trajectory_csv, "Also write long-format trajectories here");
  sweep->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "table", "csv"}));

  CLI::App* bss = app.add_subcommand("best-subset", "Exhaustive best-subset search");
  data_opts(bss);
  mic_opts(bss);
  bss->add_option("--max-p", cfg.max_p, "Refuse searches over more predictors");
  bss->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (intercept && no_intercept) {
    err << "error: --intercept and --no-intercept are mutually exclusive\n";
    return kExitUsage;
  }
  if (intercept) cfg.intercept = true;
  if (no_intercept) cfg.intercept = false;
  cfg.penalize_intercept = !no_penalize_intercept;
  if (seed) {
    cfg.seed = *seed;
  } else if (const char* env = std::getenv("MIC_SEED"); env && *env) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: MIC_SEED must be an unsigned integer\n";
      return kExitUsage;
    }
  }
  if (full_protocol) cfg.reps = 500;

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  try {
    parse_lambda0(cfg.lambda0);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (chosen == fit) return cmd_fit(cfg, out, err);
  if (chosen == sim) return cmd_simulate(cfg, out, err);
  if (chosen == sweep) return cmd_sweep_a(cfg, out, err);
  return cmd_best_subset(cfg, out, err);
}

}  // namespace mic
