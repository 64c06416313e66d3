#include "mhdreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhdreg/checkpoint.hpp"
#include "mhdreg/dynamics.hpp"
#include "mhdreg/inequality.hpp"
#include "mhdreg/report.hpp"
#include "mhdreg/spectral.hpp"

namespace mhdreg {
namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json beta_json(double beta) {
  if (std::isinf(beta)) return "inf";
  return beta;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::filesystem::path checkpoint_name(std::size_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "step_%08zu.mhdc", step);
  return buf;
}

}  // namespace

std::vector<CriterionSpec> monitored_criteria(const std::vector<CriterionSpec>& configured) {
  std::vector<CriterionSpec> out = configured;
  const auto has = [&](CriterionKind k) {
    return std::any_of(out.begin(), out.end(), [k](const CriterionSpec& s) { return s.kind == k; });
  };
  if (!has(CriterionKind::velocity_z)) out.push_back({CriterionKind::velocity_z, 6.0, 4.0});
  if (!has(CriterionKind::pressure_z)) out.push_back({CriterionKind::pressure_z, 4.0, 2.0});
  return out;
}

std::string summary_json(const MonitorSeries& series, const std::optional<BlowupDiagnostics>& blowup,
                         double blowup_time) {
  nlohmann::json doc;
  const bool any = !series.empty();
  const std::size_t last = any ? series.size() - 1 : 0;
  doc["samples"] = series.size();
  doc["t_final"] = any ? series[last].t : 0.0;
  doc["nu"] = series.nu();
  doc["eta"] = series.eta();

  nlohmann::json criteria = nlohmann::json::array();
  double m_t = 0.0, mp_t = 0.0;
  bool have_u = false, have_p = false;
  for (std::size_t i = 0; i < series.specs().size(); ++i) {
    const auto& spec = series.specs()[i];
    const auto adm = check_admissible(spec);
    const double m = any ? series.criterion_integral(i) : 0.0;
    criteria.push_back({{"kind", std::string(to_string(spec.kind))},
                        {"alpha", spec.alpha},
                        {"beta", beta_json(spec.beta)},
                        {"admissible", adm.admissible},
                        {"slack", adm.slack},
                        {"integral", m}});
    if (spec.kind == CriterionKind::velocity_z && !have_u) {
      m_t = m;
      have_u = true;
    }
    if (spec.kind == CriterionKind::pressure_z && !have_p) {
      mp_t = m;
      have_p = true;
    }
  }
  doc["criteria"] = criteria;
  doc["M_T"] = m_t;
  doc["Mp_T"] = mp_t;
  doc["D_T"] = any ? series.dissipation_integral(last) : 0.0;

  double e_final = 0.0, e_max = 0.0, div_u = 0.0, div_b = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double e = energy_residual(series, k);
    e_max = std::max(e_max, e);
    div_u = std::max(div_u, series[k].div_u_max);
    div_b = std::max(div_b, series[k].div_b_max);
  }
  if (any) e_final = energy_residual(series);
  doc["energy_residual"] = e_final;
  doc["max_energy_residual"] = e_max;
  if (series.size() >= 3) {
    doc["max_zderiv_residual"] = finite_or_null(identity_residual(series, Identity::zderiv));
    doc["max_h1_residual"] = finite_or_null(identity_residual(series, Identity::h1));
    doc["max_l4_residual"] = finite_or_null(identity_residual(series, Identity::l4));
  } else {
    doc["max_zderiv_residual"] = nullptr;
    doc["max_h1_residual"] = nullptr;
    doc["max_l4_residual"] = nullptr;
  }
  doc["max_div_u"] = div_u;
  doc["max_div_b"] = div_b;
  if (blowup) {
    doc["blowup"] = {{"time", blowup_time},
                     {"last_finite_t", blowup->t},
                     {"last_finite_step", blowup->step},
                     {"kinetic_energy", finite_or_null(blowup->kinetic_energy)},
                     {"magnetic_energy", finite_or_null(blowup->magnetic_energy)}};
  } else {
    doc["blowup"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

RunOutputs run_simulation(const RunConfig& cfg, const std::function<void(const std::string&)>& on_warning) {
  const Grid grid = cfg.grid();
  const auto specs = monitored_criteria(cfg.criteria);
  State init = initial_data(cfg.init, cfg.init_params, grid, cfg.seed);
  SolverConfig solver = cfg.solver;

  const std::filesystem::path out_dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());
  const auto ckpt_dir = out_dir / "checkpoints";
  if (cfg.checkpoint_every > 0) {
    std::filesystem::create_directories(ckpt_dir, ec);
    if (ec) throw IoError("cannot create checkpoint directory " + ckpt_dir.string());
  }

  RunOutputs out{MonitorSeries(specs, solver.nu, solver.eta), out_dir / "monitors.csv",
                 out_dir / "summary.json", {}, std::nullopt, 0.0};
  SimulationHooks hooks;
  hooks.sample_every = cfg.sample_every;
  hooks.checkpoint_every = cfg.checkpoint_every;
  hooks.on_warning = on_warning;
  hooks.on_sample = [&](const State& s, std::size_t) {
    out.series.accumulate(sample(s, specs, solver.dealias));
  };
  hooks.on_checkpoint = [&](const State& s, std::size_t step) {
    const auto path = ckpt_dir / checkpoint_name(step);
    write_checkpoint(s, solver.nu, solver.eta, path);
    out.checkpoints.push_back(path);
  };

  const auto flush = [&] {
    emit_monitor_csv(out.series, out.csv_path);
    write_text_atomic(out.summary_path, summary_json(out.series, out.blowup, out.blowup_time));
  };
  try {
    simulate(init, solver, hooks);
  } catch (const BlowupDetected& e) {
    out.blowup = e.last_finite();
    out.blowup_time = e.time();
    flush();
    throw;
  }
  flush();
  return out;
}

MonitorSeries replay_checkpoints(const std::filesystem::path& dir, const std::vector<CriterionSpec>& specs,
                                 bool dealias) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mhdc") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .mhdc checkpoints in " + dir.string());

  std::optional<MonitorSeries> series;
  std::optional<Grid> grid;
  for (const auto& f : files) {
    Checkpoint cp = read_checkpoint(f, grid);
    if (!series) {
      series.emplace(specs, cp.nu, cp.eta);
      grid = cp.state.grid();
    }
    series->accumulate(sample(cp.state, specs, dealias));
  }
  return *series;
}

namespace {

int run_cli(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // simulate
  std::string config_path, out_dir_override;
  auto* sim = app.add_subcommand("simulate", "Run a trajectory with monitors");
  sim->add_option("--config", config_path, "key = value configuration file")->required();
  sim->add_option("--out-dir", out_dir_override, "Override out_dir from the configuration");

  // check-criteria
  std::string kind_name, beta_text = "inf";
  double alpha = 0.0;
  auto* check = app.add_subcommand("check-criteria", "Classify a criterion (alpha, beta)");
  check->add_option("--kind", kind_name, "velocity | pressure | gradient")->required();
  check->add_option("--alpha", alpha, "Spatial exponent")->required();
  check->add_option("--beta", beta_text, "Time exponent or inf")->required();

  // verify-inequalities
  std::string which_name = "all", family_name = "anisotropic_gaussian", report_path = "inequality_report.json";
  int grid_n = 32;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double mu = 2.0, lambda = 2.0, q = 6.0, box_length = kTwoPi;
  auto* verify = app.add_subcommand("verify-inequalities", "Estimate interpolation-inequality constants");
  verify->add_option("--which", which_name, "A1 | A2 | A6 | all")
      ->check(CLI::IsMember({"A1", "A2", "A6", "all"}));
  verify->add_option("--grid", grid_n, "Points per axis");
  verify->add_option("--trials", trials, "Random test functions per inequality");
  verify->add_option("--seed", seed, "Sweep seed");
  verify->add_option("--mu", mu, "mu for A1 and A2");
  verify->add_option("--lambda", lambda, "lambda for A1");
  verify->add_option("--q", q, "q for A6");
  verify->add_option("--family", family_name, "periodized_gaussian | anisotropic_gaussian | random_bump_sum");
  verify->add_option("--box-length", box_length, "Box side");
  verify->add_option("--out", report_path, "JSON report path");

  // replay
  std::string ckpt_dir, replay_out;
  std::string replay_kind = "velocity", replay_beta = "inf";
  double replay_alpha = 6.0;
  bool replay_dealias = true;
  auto* replay = app.add_subcommand("replay", "Recompute monitors from stored checkpoints");
  replay->add_option("--checkpoints", ckpt_dir, "Directory of .mhdc files")->required();
  replay->add_option("--alpha", replay_alpha, "Spatial exponent")->required();
  replay->add_option("--beta", replay_beta, "Time exponent or inf")->required();
  replay->add_option("--kind", replay_kind, "velocity | pressure | gradient")->required();
  replay->add_option("--dealias", replay_dealias, "Dealias the pressure product (default true)");
  replay->add_option("--out", replay_out, "CSV path (default <checkpoints>/replay.csv)");

  app.require_subcommand(1);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const auto parse_beta = [](const std::string& text) {
    const auto spec = CriterionSpec::parse("velocity:1:" + text);
    return spec.beta;
  };

  try {
    if (*sim) {
      RunConfig cfg = load_run_config(config_path);
      if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
      try {
        const RunOutputs res = run_simulation(cfg, [&](const std::string& w) { err << "warning: " << w << '\n'; });
        out << "wrote " << res.csv_path.string() << " and " << res.summary_path.string() << " ("
            << res.series.size() << " samples, " << res.checkpoints.size() << " checkpoints)\n";
      } catch (const BlowupDetected& e) {
        err << "error: " << e.what() << "; last finite state at t = " << e.last_finite().t << " (step "
            << e.last_finite().step << ", E_u = " << e.last_finite().kinetic_energy
            << ", E_b = " << e.last_finite().magnetic_energy << ")\n";
        err.flush();
        return 2;
      }
      return 0;
    }
    if (*check) {
      CriterionSpec spec{parse_criterion_kind(kind_name), alpha, parse_beta(beta_text)};
      spec.validate();
      const auto adm = check_admissible(spec);
      out << (adm.admissible ? "admissible" : "rejected") << ", slack " << format_short(adm.slack) << '\n';
      return 0;
    }
    if (*verify) {
      const Grid grid(grid_n, box_length);
      const TestFamily family = parse_test_family(family_name);
      std::vector<Inequality> list;
      if (which_name == "all") {
        list = {Inequality::A1, Inequality::A2, Inequality::A6};
      } else {
        list = {parse_inequality(which_name)};
      }
      std::vector<InequalityRun> runs;
      for (Inequality w : list) {
        InequalityCase c{w, mu, lambda, q};
        c.validate();
        InequalityRun run{c, family, trials, seed, grid_n, box_length, empirical_constant(family, c, grid, trials, seed)};
        out << to_string(w) << ": sup ratio " << format_short(run.result.sup_ratio) << " over "
            << trials - run.result.skipped << " trials (argmax trial " << run.result.argmax << ")\n";
        runs.push_back(std::move(run));
      }
      emit_report_json(runs, report_path);
      out << "wrote " << report_path << '\n';
      return 0;
    }
    if (*replay) {
      const CriterionSpec spec{parse_criterion_kind(replay_kind), replay_alpha, parse_beta(replay_beta)};
      spec.validate();
      const auto specs = monitored_criteria({spec});
      const MonitorSeries series = replay_checkpoints(ckpt_dir, specs, replay_dealias);
      const std::filesystem::path path =
          replay_out.empty() ? std::filesystem::path(ckpt_dir) / "replay.csv" : std::filesystem::path(replay_out);
      emit_monitor_csv(series, path);
      out << "replayed " << series.size() << " checkpoints; " << to_string(spec) << " integral "
          << format_short(series.criterion_integral(0)) << "; wrote " << path.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidExponent& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const UnsupportedGrid& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    err.flush();
    return 2;
  }
  return 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral MHD solver with regularity-criterion monitors", "mhdreg"};
  return run_cli(app, args, out, err);
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mhdreg
