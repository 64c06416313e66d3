#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mhdreg/dynamics.hpp"
#include "mhdreg/errors.hpp"
#include "mhdreg/monitors.hpp"
#include "mhdreg/spectral.hpp"
#include "oracle.hpp"

using namespace mhdreg;
using std::numbers::pi;

namespace {

const std::vector<CriterionSpec> kSpecs{{CriterionKind::velocity_z, 6, 4},
                                        {CriterionKind::pressure_z, 4, 2},
                                        {CriterionKind::gradient_velocity, 3, 2}};

MonitorSeries run_series(const State& s0, SolverConfig cfg, const std::vector<CriterionSpec>& specs = kSpecs) {
  MonitorSeries series(specs, cfg.nu, cfg.eta);
  SimulationHooks h;
  h.on_sample = [&](const State& s, std::size_t) { series.accumulate(sample(s, specs, cfg.dealias)); };
  simulate(s0, cfg, h);
  return series;
}

SampleRecord with_norms(double t, std::vector<double> norms) {
  SampleRecord r;
  r.t = t;
  r.criterion_norms = std::move(norms);
  return r;
}

// (u . grad) v . w, integrated with direct-DFT derivatives.
double advect_oracle(const VectorField& a, const VectorField& v, const VectorField& w) {
  const VectorField adv = oracle::advect(a, v);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += oracle::quad(hadamard(adv[i], w[i]));
  return s;
}

}  // namespace

TEST_CASE("criterion spec parsing") {
  const CriterionSpec a = CriterionSpec::parse("velocity:6:4");
  CHECK(a.kind == CriterionKind::velocity_z);
  CHECK(a.alpha == 6.0);
  CHECK(a.beta == 4.0);
  const CriterionSpec b = CriterionSpec::parse("pressure_z:1.75:inf");
  CHECK(b.kind == CriterionKind::pressure_z);
  CHECK(std::isinf(b.beta));
  CHECK(CriterionSpec::parse(to_string(b)) == b);
  CHECK(CriterionSpec::parse("gradient:3:2").kind == CriterionKind::gradient_velocity);
  CHECK_THROWS_AS(CriterionSpec::parse("velocity:0.5:2"), InvalidExponent);
  CHECK_THROWS_AS(CriterionSpec::parse("velocity:6"), Error);
  CHECK_THROWS_AS(CriterionSpec::parse("speed:6:4"), Error);
  CHECK_THROWS_AS(CriterionSpec::parse("velocity:inf:4"), InvalidExponent);
}

TEST_CASE("admissibility verdicts") {
  struct Case {
    CriterionKind kind;
    double alpha, beta;
    bool admissible;
    double slack;
  };
  const Case cases[] = {
      {CriterionKind::velocity_z, 6, 4, true, 0.0},
      {CriterionKind::velocity_z, 3, kInf, true, 0.0},
      {CriterionKind::velocity_z, 3, 10, false, -0.2},
      {CriterionKind::velocity_z, 12, 4, true, 0.25},
      {CriterionKind::velocity_z, 2, kInf, false, -0.5},
      {CriterionKind::pressure_z, 4, 2, true, 0.0},
      {CriterionKind::pressure_z, 12.0 / 7.0, kInf, true, 0.0},
      {CriterionKind::pressure_z, 1.5, kInf, false, -0.25},
      {CriterionKind::gradient_velocity, 3, 2, true, 0.0},
      {CriterionKind::gradient_velocity, 3, 3, false, 1.0 / 3.0},
  };
  for (const Case& c : cases) {
    const Admissibility a = check_admissible({c.kind, c.alpha, c.beta});
    INFO(to_string(c.kind), " ", c.alpha, " ", c.beta);
    CHECK(a.admissible == c.admissible);
    CHECK(std::abs(a.slack - c.slack) <= 1e-12);
  }
  CHECK(check_admissible({CriterionKind::gradient_velocity, 6, 4.0 / 3.0}).admissible);
  // On the line with beta > 2.
  CHECK_FALSE(check_admissible({CriterionKind::gradient_velocity, 1.5, kInf}).admissible);
}

TEST_CASE("admissibility is monotone in alpha and beta") {
  const double alphas[] = {1.0, 1.5, 12.0 / 7.0, 2.0, 2.9, 3.0, 4.0, 6.0, 9.0, 50.0};
  const double betas[] = {1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 100.0, kInf};
  for (CriterionKind k : {CriterionKind::velocity_z, CriterionKind::pressure_z}) {
    for (std::size_t i = 0; i < std::size(alphas); ++i) {
      for (std::size_t j = 0; j < std::size(betas); ++j) {
        if (!check_admissible({k, alphas[i], betas[j]}).admissible) continue;
        if (i + 1 < std::size(alphas)) CHECK(check_admissible({k, alphas[i + 1], betas[j]}).admissible);
        if (j + 1 < std::size(betas)) CHECK(check_admissible({k, alphas[i], betas[j + 1]}).admissible);
      }
    }
  }
}

TEST_CASE("Hoelder exponents") {
  const HolderExponents e = HolderExponents::from_alpha(6.0);
  CHECK(1.0 / e.r + 1.0 / 18.0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.q == doctest::Approx(0.8));
  CHECK(e.gamma == doctest::Approx(4.0));
  CHECK(1.0 / 6.0 + 2.0 / e.lambda_p == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(e.growth == doctest::Approx(6.0 / 9.0));
  CHECK(std::isinf(HolderExponents::from_alpha(3.0).gamma));
  CHECK_THROWS_AS(HolderExponents::from_alpha(0.5), InvalidExponent);
}

TEST_CASE("sample: closed forms") {
  const Grid g(16);
  SUBCASE("z-independent state has zero z-norms") {
    InitParams p;
    p.epsilon = 0.0;
    const State s = initial_data(InitKind::orszag_tang_3d, p, g, 0);
    const SampleRecord r = sample(s, kSpecs);
    CHECK(r.criterion_norms[0] == 0.0);
    CHECK(r.criterion_norms[1] == 0.0);
    CHECK(r.uz_sq == 0.0);
    CHECK(r.grad_uz_sq == 0.0);
    CHECK(r.criterion_norms[2] > 0.0);
  }
  SUBCASE("shear decay at time t") {
    State s = initial_data(InitKind::shear_decay, {}, g, 0);
    const double t = 0.3;
    s.u *= std::exp(-t);
    s.b *= std::exp(-t);
    s.t = t;
    const std::vector<CriterionSpec> l2{{CriterionKind::velocity_z, 2, 2}};
    const SampleRecord r = sample(s, l2);
    CHECK(r.criterion_norms[0] == doctest::Approx(std::exp(-t) * 2 * pi * std::sqrt(pi)).epsilon(1e-13));
    CHECK(r.grad_uz_sq == doctest::Approx(r.uz_sq).epsilon(1e-13));
    CHECK(std::abs(r.zderiv_rhs()) <= 1e-14);
    CHECK(std::abs(r.h1_rhs) <= 1e-14);
    CHECK(r.div_u_max <= 1e-15);
  }
  SUBCASE("zero state") {
    const VectorField z(g);
    const SampleRecord r = sample(State{z, z, 0.0}, kSpecs);
    CHECK(r.kinetic_energy == 0.0);
    CHECK(r.grad_u_sq == 0.0);
    CHECK(r.wp4 == 0.0);
    CHECK(r.h1_rhs == 0.0);
    for (double v : r.criterion_norms) CHECK(v == 0.0);
  }
}

TEST_CASE("sample matches direct-DFT quadratures") {
  const Grid g(8);
  std::mt19937_64 rng(29);
  const VectorField u = oracle::solenoidal(g, 1, rng), b = oracle::solenoidal(g, 1, rng);
  const State s{u, b, 0.0};
  const ScalarField p = pressure_solve(u - b, u + b);
  const SampleRecord r = sample(s, p, kSpecs);

  std::array<VectorField, 2> dz{VectorField(g), VectorField(g)};
  double grad_uz = 0.0, grad_bz = 0.0;
  for (int i = 0; i < 3; ++i) {
    dz[0][i] = oracle::derivative(u[i], 2);
    dz[1][i] = oracle::derivative(b[i], 2);
    for (int j = 0; j < 3; ++j) {
      const ScalarField a = oracle::derivative(dz[0][i], j), c = oracle::derivative(dz[1][i], j);
      grad_uz += oracle::quad(hadamard(a, a));
      grad_bz += oracle::quad(hadamard(c, c));
    }
  }
  CHECK(r.grad_uz_sq == doctest::Approx(grad_uz).epsilon(1e-12));
  CHECK(r.grad_bz_sq == doctest::Approx(grad_bz).epsilon(1e-12));

  const VectorField& uz = dz[0];
  const VectorField& bz = dz[1];
  const double scale = 1.0 + std::abs(r.zderiv_terms[0]) + std::abs(r.zderiv_terms[1]);
  CHECK(std::abs(r.zderiv_terms[0] + advect_oracle(uz, u, uz)) <= 1e-12 * scale);
  CHECK(std::abs(r.zderiv_terms[1] - advect_oracle(bz, b, uz)) <= 1e-12 * scale);
  CHECK(std::abs(r.zderiv_terms[2] + advect_oracle(uz, b, bz)) <= 1e-12 * scale);
  CHECK(std::abs(r.zderiv_terms[3] - advect_oracle(bz, u, bz)) <= 1e-12 * scale);

  const VectorField lu = oracle::laplacian(u), lb = oracle::laplacian(b);
  const double h1 = advect_oracle(u, u, lu) - advect_oracle(b, b, lu) + advect_oracle(u, b, lb) - advect_oracle(b, u, lb);
  CHECK(r.h1_rhs == doctest::Approx(h1).epsilon(1e-11));

  const ScalarField uz_mag = magnitude(uz);
  CHECK(r.criterion_norms[0] == doctest::Approx(lp_norm(uz_mag, 6.0)).epsilon(1e-13));
  CHECK(r.criterion_norms[1] == doctest::Approx(lp_norm(oracle::derivative(p, 2), 4.0)).epsilon(1e-12));
}

TEST_CASE("accumulate") {
  const std::vector<CriterionSpec> specs{{CriterionKind::velocity_z, 6, 3}, {CriterionKind::velocity_z, 6, kInf}};
  SUBCASE("constant norm integrates exactly, sup semantics for beta = inf") {
    MonitorSeries s(specs);
    const double norms[] = {1.0, 3.0, 2.0};
    for (int k = 0; k < 3; ++k) s.accumulate(with_norms(0.5 * k, {2.0, norms[k]}));
    CHECK(s.criterion_integral(0) == doctest::Approx(8.0 * 1.0));
    CHECK(s.criterion_integral(1) == 3.0);
    CHECK(s.criterion_integral(1, 0) == 1.0);
    CHECK(s.times() == std::vector<double>{0.0, 0.5, 1.0});
  }
  SUBCASE("time order and norm count") {
    MonitorSeries s(specs);
    s.accumulate(with_norms(0.0, {0, 0}));
    CHECK_THROWS_AS(s.accumulate(with_norms(0.0, {0, 0})), TimeOrder);
    CHECK_THROWS_AS(s.accumulate(with_norms(-1.0, {0, 0})), TimeOrder);
    CHECK_THROWS_AS(s.accumulate(with_norms(1.0, {0})), std::invalid_argument);
  }
  SUBCASE("empty series") {
    MonitorSeries s(specs);
    CHECK_THROWS_AS(energy_residual(s), DegenerateInput);
    CHECK_THROWS_AS(identity_residual(s, Identity::zderiv), WindowTooShort);
  }
}

TEST_CASE("energy and identity residuals on exact decay") {
  const Grid g(16);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  const MonitorSeries s = run_series(initial_data(InitKind::shear_decay, {}, g, 0), cfg);
  CHECK(energy_residual(s, 0) == 0.0);
  CHECK(energy_residual(s) <= 1e-8);
  for (std::size_t k = 1; k < s.size(); ++k) {
    CHECK(s.dissipation_integral(k) >= s.dissipation_integral(k - 1));
    CHECK(s.criterion_integral(0, k) >= s.criterion_integral(0, k - 1));
  }

  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  const MonitorSeries fine = run_series(initial_data(InitKind::shear_decay, {}, g, 0), cfg);
  CHECK(zderiv_identity_residual(fine) <= 1e-6);
  CHECK(h1_identity_residual(fine) <= 1e-6);
  // X = ||w+||_4^4 + ||w-||_4^4 decays like exp(-4t); the centred stencil then
  // leaves (1/4) dt^2 X'''/6 = (8/3) dt^2 X.
  const auto r = identity_residuals(fine, Identity::l4);
  for (std::size_t k = 1; k + 1 < fine.size(); ++k) {
    const double x = fine[k].wp4 + fine[k].wm4;
    CHECK(r[k] == doctest::Approx(8.0 / 3.0 * 1e-6 * x / (x + 1)).epsilon(1e-2));
  }
}

TEST_CASE("identity residuals: zero state, window rules, unequal diffusivities") {
  const Grid g(8);
  const VectorField z(g);
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 0.3;
  const MonitorSeries s = run_series(State{z, z, 0.0}, cfg);
  CHECK(s.size() == 4);
  for (Identity id : {Identity::zderiv, Identity::h1, Identity::l4}) CHECK(identity_residual(s, id) == 0.0);
  CHECK(identity_residuals(s, Identity::h1, 1, 3).size() == 3);
  CHECK_THROWS_AS(identity_residuals(s, Identity::h1, 2, 2), WindowTooShort);
  CHECK_THROWS_AS(identity_residuals(s, Identity::h1, 2, 3), std::out_of_range);

  cfg.eta = 2.0;
  const MonitorSeries u = run_series(State{z, z, 0.0}, cfg);
  CHECK(std::isnan(l4_identity_residual(u)));
  CHECK(zderiv_identity_residual(u) == 0.0);
}

TEST_CASE("L4 identity on Navier-Stokes Taylor-Green") {
  const Grid g(32);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2e-3;
  cfg.nu = cfg.eta = 0.5;
  const MonitorSeries s = run_series(initial_data(InitKind::taylor_green, {}, g, 0), cfg);
  CHECK(s.size() == 3);
  CHECK(s[0].l4_terms[0] == doctest::Approx(s[0].l4_terms[1]));
  CHECK(l4_identity_residual(s) <= 1e-5);

  // Taylor-Green decays exactly, X ~ exp(-8 nu t), so the residual is the
  // stencil error (1/4) dt^2 (8 nu)^3 X / 6. With nu = 1 that is 2.1e-5 X.
  for (double nu : {0.5, 1.0}) {
    cfg.nu = cfg.eta = nu;
    const MonitorSeries v = run_series(initial_data(InitKind::taylor_green, {}, g, 0), cfg);
    const double x = v[1].wp4 + v[1].wm4;
    const double predicted = std::pow(8.0 * nu, 3) / 24.0 * 1e-6 * x / (x + 1);
    CHECK(l4_identity_residual(v) == doctest::Approx(predicted).epsilon(2e-2));
  }
}

TEST_CASE("Lagrange stencil handles nonuniform sample times") {
  // X(t) = t^2 sampled at 0, 0.1, 0.3: the quadratic stencil is exact.
  const std::vector<CriterionSpec> none;
  MonitorSeries s(none);
  for (double t : {0.0, 0.1, 0.3}) {
    SampleRecord r;
    r.t = t;
    r.uz_sq = t * t;
    r.grad_uz_sq = -t;  // 1/2 dX/dt + D = t - t = 0
    s.accumulate(r);
  }
  for (double v : identity_residuals(s, Identity::zderiv)) CHECK(v <= 1e-15);
}

TEST_CASE("H1 cubic bound on random band-limited states") {
  const Grid g(16);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    InitParams p;
    p.k_max = 3.0;
    const double ratio = h1_cubic_bound_ratio(initial_data(InitKind::random_bandlimited, p, g, seed));
    CHECK(std::isfinite(ratio));
    CHECK(ratio <= 1.0 + 1e-10);
  }
  const VectorField z(g);
  CHECK(std::isnan(h1_cubic_bound_ratio(State{z, z, 0.0})));
}

TEST_CASE("Hoelder chains") {
  const Grid g(16);
  SUBCASE("random states satisfy the constant-one steps") {
    for (double alpha : {3.0, 6.0}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const State s = initial_data(InitKind::random_bandlimited, {}, g, seed);
        const ScalarField p = pressure_solve(s.u - s.b, s.u + s.b);
        const HolderReport r = holder_chain_check(s, p, HolderExponents::from_alpha(alpha));
        CHECK(r.entries.size() == 6);
        CHECK(r.max_constant_one_ratio() <= 1.0 + 1e-10);
        CHECK(r.max_constant_one_ratio() > 0.0);
        CHECK(r.constant_unknown_finite());
      }
    }
  }
  SUBCASE("shear decay has I1 = 0") {
    const State s = initial_data(InitKind::shear_decay, {}, g, 0);
    const ScalarField p = pressure_solve(s.u - s.b, s.u + s.b);
    const HolderReport r = holder_chain_check(s, p, HolderExponents::from_alpha(6.0), HolderChain::velocity);
    CHECK(r.entries[0].name == "I1");
    CHECK(r.entries[0].lhs <= 1e-14);
    CHECK(r.entries[0].defined);
  }
  SUBCASE("zero state: every ratio undefined") {
    const VectorField z(g);
    const HolderReport r = holder_chain_check(State{z, z, 0.0}, ScalarField(g), HolderExponents::from_alpha(6.0));
    for (const auto& e : r.entries) CHECK_FALSE(e.defined);
    CHECK(r.max_constant_one_ratio() == 0.0);
  }
  SUBCASE("exponent preconditions") {
    const State s = initial_data(InitKind::shear_decay, {}, g, 0);
    const ScalarField p(g);
    CHECK_THROWS_AS(holder_chain_check(s, p, HolderExponents::from_alpha(2.0)), InvalidExponent);
    CHECK_NOTHROW(holder_chain_check(s, p, HolderExponents::from_alpha(2.0), HolderChain::pressure));
    CHECK_THROWS_AS(holder_chain_check(s, p, HolderExponents::from_alpha(1.5), HolderChain::pressure), InvalidExponent);
  }
}
