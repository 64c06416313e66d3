// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mhdreg/checkpoint.hpp"
#include "mhdreg/cli.hpp"
#include "mhdreg/dynamics.hpp"
#include "mhdreg/inequality.hpp"
#include "mhdreg/monitors.hpp"
#include "mhdreg/report.hpp"
#include "mhdreg/spectral.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

using namespace mhdreg;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-28s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

MonitorSeries run_monitored(const State& init, const SolverConfig& cfg, const std::vector<CriterionSpec>& specs) {
  MonitorSeries series(specs, cfg.nu, cfg.eta);
  SimulationHooks hooks;
  hooks.on_sample = [&](const State& s, std::size_t) { series.accumulate(sample(s, specs, cfg.dealias)); };
  simulate(init, cfg, hooks);
  return series;
}

State orszag_tang(int n) {
  InitParams p;
  p.epsilon = 0.1;
  return initial_data(InitKind::orszag_tang_3d, p, Grid(n), 0);
}

std::vector<State> random_states(int n, int count, std::uint64_t seed0) {
  std::vector<State> out;
  InitParams p;
  p.k_max = 3.0;
  for (int i = 0; i < count; ++i) out.push_back(initial_data(InitKind::random_bandlimited, p, Grid(n), seed0 + i));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Shared by criteria 2 and 3.
struct Crit2Run {
  MonitorSeries series;
  double runtime = 0.0;
};

const Crit2Run& criterion2_run() {
  static const Crit2Run run = [] {
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 1.0;
    const auto t0 = Clock::now();
    MonitorSeries s = run_monitored(orszag_tang(32), cfg, monitored_criteria({}));
    return Crit2Run{std::move(s), seconds_since(t0)};
  }();
  return run;
}

Outcome criterion1() {
  const Grid g(16);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  const auto t0 = Clock::now();
  const State init = initial_data(InitKind::shear_decay, {}, g, 0);
  const Trajectory tr = simulate(init, cfg);
  const double runtime = seconds_since(t0);
  const State& s = *tr.final_state;
  const double decay = std::exp(-s.t);
  double err = std::abs(s.t - 1.0);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(s.u[c][i] - decay * init.u[c][i]));
      err = std::max(err, std::abs(s.b[c][i] - decay * init.b[c][i]));
    }
  }
  return {err <= 1e-10 && runtime < 5.0, fmt("max pointwise error %.2e (<= 1e-10), runtime %.2f s (< 5 s)", err, runtime)};
}

Outcome criterion2() {
  const auto& run = criterion2_run();
  double worst = 0.0;
  for (std::size_t k = 0; k < run.series.size(); ++k) worst = std::max(worst, energy_residual(run.series, k));
  return {worst <= 1e-6 && run.runtime < 120.0,
          fmt("%zu samples, max relative energy residual %.2e (<= 1e-6), runtime %.1f s (< 120 s)",
              run.series.size(), worst, run.runtime)};
}

Outcome criterion3() {
  const auto& run = criterion2_run();
  const double vol = std::pow(2 * pi, 3);
  double worst = 0.0;
  for (const auto& s : run.series.samples()) {
    const double su = std::sqrt(s.grad_u_sq / vol), sb = std::sqrt(s.grad_b_sq / vol);
    worst = std::max(worst, s.div_u_max / su);
    worst = std::max(worst, s.div_b_max / sb);
  }
  return {worst <= 1e-10, fmt("max |div| / rms |grad| over %zu samples %.2e (<= 1e-10)", run.series.size(), worst)};
}

// Criteria 4 and 5 share two orszag_tang runs at dt and dt/2.
struct IdentityRuns {
  MonitorSeries coarse, fine;
};

const IdentityRuns& identity_runs() {
  static const IdentityRuns runs = [] {
    SolverConfig cfg;
    cfg.t_end = 0.25;
    cfg.dt = 1e-3;
    MonitorSeries c = run_monitored(orszag_tang(32), cfg, monitored_criteria({}));
    cfg.dt = 5e-4;
    MonitorSeries f = run_monitored(orszag_tang(32), cfg, monitored_criteria({}));
    return IdentityRuns{std::move(c), std::move(f)};
  }();
  return runs;
}

struct Convergence {
  double coarse, fine, factor;
  bool ok;
};

Convergence convergence(Identity id) {
  const auto& r = identity_runs();
  const double c = identity_residual(r.coarse, id), f = identity_residual(r.fine, id);
  const double factor = c / f;
  return {c, f, factor, c <= 1e-4 && factor >= 3.5 && factor <= 4.5};
}

Outcome criterion4() {
  const Convergence z = convergence(Identity::zderiv);
  return {z.ok, fmt("zderiv residual %.2e at dt 1e-3 (<= 1e-4), %.2e at 5e-4, factor %.3f (in [3.5, 4.5])", z.coarse,
                    z.fine, z.factor)};
}

Outcome criterion5() {
  const Convergence h = convergence(Identity::h1), l = convergence(Identity::l4);
  double worst = 0.0;
  for (const State& s : random_states(16, 50, 500)) worst = std::max(worst, h1_cubic_bound_ratio(s));
  const bool ok = h.ok && l.ok && worst <= 1 + 1e-10;
  return {ok, fmt("h1 %.2e, factor %.3f; l4 %.2e, factor %.3f; max cubic-bound ratio %.4f (<= 1 + 1e-10)", h.coarse,
                  h.factor, l.coarse, l.factor, worst)};
}

Outcome criterion6() {
  double worst = 0.0;
  bool finite = true;
  std::size_t checked = 0;
  for (const State& s : random_states(16, 50, 900)) {
    const ScalarField p = pressure_solve(s.u - s.b, s.u + s.b);
    for (double alpha : {3.0, 6.0, 12.0}) {
      const HolderReport r = holder_chain_check(s, p, HolderExponents::from_alpha(alpha));
      worst = std::max(worst, r.max_constant_one_ratio());
      finite = finite && r.constant_unknown_finite();
      for (const auto& e : r.entries) checked += e.defined ? 1 : 0;
    }
  }
  return {worst <= 1 + 1e-10 && finite && checked > 0,
          fmt("%zu ratios, max class-(a) %.6f (<= 1 + 1e-10), class-(b) finite: %s", checked, worst,
              finite ? "yes" : "no")};
}

Outcome criterion7() {
  const Grid g(16);
  // z-independent MHD data: orszag_tang without its z-perturbation.
  InitParams flat;
  flat.epsilon = 0.0;
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.5;
  const std::vector<CriterionSpec> specs = {{CriterionKind::velocity_z, 6, 4},
                                            {CriterionKind::pressure_z, 4, 2},
                                            {CriterionKind::gradient_velocity, 6, 4}};
  const MonitorSeries zi = run_monitored(initial_data(InitKind::orszag_tang_3d, flat, g, 0), cfg, specs);
  const double scale = zi.criterion_integral(2);
  const double m_rel = zi.criterion_integral(0) / scale, mp_rel = zi.criterion_integral(1) / scale;

  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  const std::vector<CriterionSpec> l2 = {{CriterionKind::velocity_z, 2, 2}};
  const MonitorSeries sh = run_monitored(initial_data(InitKind::shear_decay, {}, g, 0), cfg, l2);
  const double T = sh[sh.size() - 1].t;
  const double exact = 4 * pi * pi * pi * (1 - std::exp(-2 * T)) / 2;
  const double rel = std::abs(sh.criterion_integral(0) / exact - 1);
  const bool ok = scale > 0 && m_rel <= 1e-12 && mp_rel <= 1e-12 && rel <= 1e-6;
  return {ok, fmt("z-independent M %.1e, M_p %.1e relative to M_grad (<= 1e-12); shear (2,2) M(1) rel err %.2e (<= 1e-6)", m_rel,
                  mp_rel, rel)};
}

Outcome criterion8() {
  struct Row {
    CriterionKind kind;
    double alpha, beta;
    bool admissible;
    double slack;
  };
  const double inf = kInf;
  const Row rows[] = {
      {CriterionKind::velocity_z, 6, 4, true, 0},
      {CriterionKind::velocity_z, 3, inf, true, 0},
      {CriterionKind::velocity_z, 3, 10, false, -0.2},
      {CriterionKind::velocity_z, 12, 4, true, 0.25},
      {CriterionKind::velocity_z, 2, inf, false, -0.5},
      {CriterionKind::pressure_z, 4, 2, true, 0},
      {CriterionKind::pressure_z, 12.0 / 7.0, inf, true, 0},
      {CriterionKind::pressure_z, 1.5, inf, false, -0.25},
      {CriterionKind::gradient_velocity, 3, 2, true, 0},
      {CriterionKind::gradient_velocity, 3, 3, false, 1.0 / 3.0},
  };
  int right = 0;
  double worst = 0.0;
  for (const Row& r : rows) {
    const Admissibility a = check_admissible({r.kind, r.alpha, r.beta});
    const double err = std::abs(a.slack - r.slack);
    worst = std::max(worst, err);
    if (a.admissible == r.admissible && err <= 1e-12) ++right;
  }
  return {right == 10, fmt("%d/10 verdicts correct, max slack error %.1e (<= 1e-12)", right, worst)};
}

Outcome criterion9() {
  std::vector<std::string> notes;
  bool ok = true;
  const Grid g32(32);
  const double L = g32.length();
  const TestFamily families[] = {TestFamily::periodized_gaussian, TestFamily::anisotropic_gaussian,
                                 TestFamily::random_bump_sum};

  // q = 2, homogeneity and cross-consistency on random members of every family.
  double q2 = 0.0, homog = 0.0, cross = 0.0;
  for (TestFamily f : families) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const ScalarField phi = make_test_function(random_spec(f, L, seed), g32);
      q2 = std::max(q2, std::abs(check_A6(phi, 2) - 1));
      const double a1 = check_A1(phi, AnisoParams::make(2, 2)), a6 = check_A6(phi, 4);
      const double a2 = check_A2(phi, 3), a1m = check_A1(phi, AnisoParams::make(3, 2));
      for (double c : {1e-3, 1e3}) {
        const ScalarField scaled = c * phi;
        homog = std::max(homog, std::abs(check_A1(scaled, AnisoParams::make(2, 2)) / a1 - 1));
        homog = std::max(homog, std::abs(check_A2(scaled, 3) / a2 - 1));
        homog = std::max(homog, std::abs(check_A6(scaled, 4) / a6 - 1));
      }
      cross = std::max(cross, std::abs(a1m / a2 - 1));
      cross = std::max(cross, std::abs(a1 / check_A6(phi, 6) - 1));
    }
  }
  ok = ok && q2 <= 1e-13 && homog <= 1e-12 && cross <= 1e-12;
  notes.push_back(fmt("q=2 %.1e, homog %.1e, cross %.1e", q2, homog, cross));

  // Dilation by s = 2 about the box centre; grids resolve the dilated function.
  double dil = 0.0;
  {
    const Grid g(160);
    const auto [a, b] = dilation_invariance(gaussian_spec(g.length(), g.length() / 32), g, {Inequality::A6, 2, 2, 4}, 2);
    dil = std::max(dil, std::abs(b / a - 1));
  }
  {
    const Grid g(192);
    const TestFunctionSpec spec = gaussian_spec(g.length(), g.length() / 24);
    const auto [a, b] = dilation_invariance(spec, g, {Inequality::A1, 4, 2, 6}, 2);
    dil = std::max(dil, std::abs(b / a - 1));
    const auto [c, d] = dilation_invariance(spec, g, {Inequality::A2, 4, 2, 6}, 2);
    dil = std::max(dil, std::abs(d / c - 1));
  }
  ok = ok && dil <= 1e-9;
  notes.push_back(fmt("dilation %.1e", dil));

  // 200-trial sweep timing and refinement stability over the first 50 trials.
  const InequalityCase a1{Inequality::A1, 2, 2, 6};
  const auto t0 = Clock::now();
  const EmpiricalConstant sweep = empirical_constant(TestFamily::anisotropic_gaussian, a1, g32, 200, 7);
  const double sweep_time = seconds_since(t0);
  ok = ok && sweep_time < 60.0 && sweep.skipped < 200;
  notes.push_back(fmt("200-trial sweep %.1f s", sweep_time));

  double worst_factor = 1.0;
  const Grid g64(64);
  const InequalityCase cases[] = {a1, {Inequality::A2, 3, 2, 6}, {Inequality::A6, 2, 2, 4}};
  for (TestFamily f : families) {
    for (const auto& c : cases) {
      const double s32 = empirical_constant(f, c, g32, 50, 7).sup_ratio;
      const double s64 = empirical_constant(f, c, g64, 50, 7).sup_ratio;
      worst_factor = std::max({worst_factor, s32 / s64, s64 / s32});
    }
  }
  ok = ok && worst_factor <= 2.0;
  notes.push_back(fmt("N->2N sup factor %.3f", worst_factor));

  std::string d;
  for (const auto& n : notes) d += (d.empty() ? "" : "; ") + n;
  return {ok, d};
}

Outcome criterion10() {
  const Grid g(32);
  const auto tg = VectorField::sample(g, [](double x, double y, double) {
    return std::array<double, 3>{std::cos(x) * std::sin(y), -std::sin(x) * std::cos(y), 0.0};
  });
  const ScalarField p = pressure_solve(tg, tg);
  const auto exact = ScalarField::sample(g, [](double x, double y, double) {
    return -0.25 * (std::cos(2 * x) + std::cos(2 * y));
  });
  const double err = lp_norm(p - exact, 2.0);
  const double res = lp_norm(laplacian(p) + advective_divergence(tg, tg), 2.0);
  return {err <= 1e-10 && res <= 1e-10, fmt("||p - exact||_2 %.2e, Poisson residual %.2e (<= 1e-10)", err, res)};
}

Outcome criterion11() {
  const fs::path root = fs::temp_directory_path() / fmt("mhdreg_acceptance_%d", static_cast<int>(std::random_device{}() % 1000000));
  fs::create_directories(root);
  const auto cleanup = [&] {
    std::error_code ec;
    fs::remove_all(root, ec);
  };

  RunConfig cfg;
  cfg.grid_n = 16;
  cfg.solver.dt = 5e-3;
  cfg.solver.t_end = 0.1;
  cfg.init = InitKind::random_bandlimited;
  cfg.seed = 42;
  cfg.checkpoint_every = 1;
  cfg.criteria = {{CriterionKind::velocity_z, 6, 4}};

  cfg.out_dir = (root / "a").string();
  const RunOutputs a = run_simulation(cfg);
  cfg.out_dir = (root / "b").string();
  run_simulation(cfg);
  bool same = slurp(root / "a" / "monitors.csv") == slurp(root / "b" / "monitors.csv") &&
              slurp(root / "a" / "summary.json") == slurp(root / "b" / "summary.json");

  std::ostringstream sink;
  std::string reports[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = (root / fmt("ineq%d.json", i)).string();
    cli_main({"verify-inequalities", "--which", "all", "--trials", "5", "--seed", "3", "--out", out}, sink, sink);
    reports[i] = slurp(out);
  }
  same = same && !reports[0].empty() && reports[0] == reports[1];

  // Checkpoint round trip of the final state.
  const Checkpoint last = read_checkpoint(a.checkpoints.back());
  const fs::path copy = root / "copy.mhdc";
  write_checkpoint(last.state, last.nu, last.eta, copy);
  const bool bit_exact = slurp(copy) == slurp(a.checkpoints.back());

  // Replay from the per-step checkpoints.
  const MonitorSeries replay = replay_checkpoints(root / "a" / "checkpoints", a.series.specs());
  double worst = replay.size() == a.series.size() ? 0.0 : kInf;
  const auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  for (std::size_t k = 0; k < std::min(replay.size(), a.series.size()); ++k) {
    const SampleRecord &r = replay[k], &o = a.series[k];
    for (double d : {rel(r.t, o.t), rel(r.kinetic_energy, o.kinetic_energy), rel(r.magnetic_energy, o.magnetic_energy),
                     rel(r.grad_u_sq, o.grad_u_sq), rel(r.grad_b_sq, o.grad_b_sq), rel(r.grad_uz_sq, o.grad_uz_sq),
                     rel(r.h1_rhs, o.h1_rhs), rel(r.l4_terms[0], o.l4_terms[0]), rel(r.wp4, o.wp4),
                     rel(replay.dissipation_integral(k), a.series.dissipation_integral(k)),
                     rel(replay.energy_dissipation(k), a.series.energy_dissipation(k))}) {
      worst = std::max(worst, d);
    }
    for (std::size_t i = 0; i < r.criterion_norms.size(); ++i) {
      worst = std::max(worst, rel(r.criterion_norms[i], o.criterion_norms[i]));
      worst = std::max(worst, rel(replay.criterion_integral(i, k), a.series.criterion_integral(i, k)));
    }
  }
  cleanup();
  return {same && bit_exact && worst <= 1e-12,
          fmt("byte-identical CSV/JSON: %s; checkpoint bit-exact: %s; replay max rel diff %.1e over %zu samples (<= 1e-12)",
              same ? "yes" : "no", bit_exact ? "yes" : "no", worst, replay.size())};
}

}  // namespace

int main() {
#if defined(__GLIBC__)
  // Same allocator settings as the mhdreg tool.
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
  std::printf("mhdreg acceptance suite\n");
  report(1, "exact decay", criterion1);
  report(2, "energy identity", criterion2);
  report(3, "solenoidality", criterion3);
  report(4, "z-derivative identity", criterion4);
  report(5, "H1 and L4 identities", criterion5);
  report(6, "constant-1 Hoelder chain", criterion6);
  report(7, "criterion monitors", criterion7);
  report(8, "admissibility table", criterion8);
  report(9, "inequality lab", criterion9);
  report(10, "pressure oracle", criterion10);
  report(11, "determinism and persistence", criterion11);
  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
