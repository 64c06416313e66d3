#include "mhdreg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "mhdreg/checkpoint.hpp"
#include "mhdreg/errors.hpp"

namespace mhdreg {
namespace {

constexpr double kSolenoidalTolerance = 1e-8;

void require_solenoidal(const VectorField& v, const char* name) {
  const double defect = solenoidal_defect(v);
  if (defect > kSolenoidalTolerance) {
    std::ostringstream msg;
    msg << name << " has solenoidal defect " << defect << " above " << kSolenoidalTolerance;
    throw NotSolenoidal(msg.str());
  }
}

bool all_finite(const ComplexVector& c) {
  return std::all_of(c.begin(), c.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

}  // namespace

ElsasserState to_elsasser(const State& s) {
  require_same_grid(s.u.grid(), s.b.grid(), "to_elsasser");
  return ElsasserState{s.u + s.b, s.u - s.b, s.t};
}

State from_elsasser(const ElsasserState& e) {
  require_same_grid(e.w_plus.grid(), e.w_minus.grid(), "from_elsasser");
  return State{0.5 * (e.w_plus + e.w_minus), 0.5 * (e.w_plus - e.w_minus), e.t};
}

double kinetic_energy(const State& s) { return inner_product(s.u, s.u); }
double magnetic_energy(const State& s) { return inner_product(s.b, s.b); }

Form parse_form(std::string_view name) {
  if (name == "primitive") return Form::primitive;
  if (name == "elsasser") return Form::elsasser;
  throw InvalidConfig("unknown form '" + std::string(name) + "'");
}

std::string_view to_string(Form form) {
  return form == Form::primitive ? "primitive" : "elsasser";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidConfig("dt must be positive");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidConfig("nu must be >= 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidConfig("eta must be >= 0");
  if (!std::isfinite(t_end)) throw InvalidConfig("t_end must be finite");
  if (form == Form::elsasser && nu != eta) {
    throw InvalidConfig("the Elsasser form requires nu == eta");
  }
}

Integrator::Integrator(const Grid& grid, const SolverConfig& cfg)
    : ctx_(SpectralContext::get(grid)), cfg_(cfg) {
  cfg_.validate();
  const std::size_t ns = ctx_->spectral_size();
  for (Coeffs* c : {&a_, &k1_, &k2_, &k3_, &k4_, &tmp_}) {
    for (auto& v : *c) v.assign(ns, Complex{});
  }
  for (auto& p : phys_) p.assign(grid.size(), 0.0);
  product_.assign(grid.size(), 0.0);
  product_hat_.assign(ns, Complex{});
  scratch_.assign(ns, Complex{});
}

double Integrator::rate(int field) const noexcept {
  if (cfg_.form == Form::elsasser) return cfg_.nu;
  return field < 3 ? cfg_.nu : cfg_.eta;
}

void Integrator::set_state(const State& s) {
  require_same_grid(s.u.grid(), ctx_->grid(), "Integrator::set_state");
  require_same_grid(s.b.grid(), ctx_->grid(), "Integrator::set_state");
  for (int c = 0; c < 3; ++c) {
    ctx_->forward(s.u[c].data(), a_[c].data());
    ctx_->forward(s.b[c].data(), a_[3 + c].data());
  }
  if (cfg_.form == Form::elsasser) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < a_[c].size(); ++i) {
        const Complex u = a_[c][i], b = a_[3 + c][i];
        a_[c][i] = u + b;
        a_[3 + c][i] = u - b;
      }
    }
  }
  ctx_->project(a_[0].data(), a_[1].data(), a_[2].data());
  ctx_->project(a_[3].data(), a_[4].data(), a_[5].data());
  t_ = s.t;
}

State Integrator::state() const {
  const Grid& g = ctx_->grid();
  State s{VectorField(g), VectorField(g), t_};
  ComplexVector work(ctx_->spectral_size());
  for (int c = 0; c < 3; ++c) {
    if (cfg_.form == Form::elsasser) {
      for (std::size_t i = 0; i < work.size(); ++i) work[i] = 0.5 * (a_[c][i] + a_[3 + c][i]);
      ctx_->inverse_destructive(work.data(), s.u[c].data());
      for (std::size_t i = 0; i < work.size(); ++i) work[i] = 0.5 * (a_[c][i] - a_[3 + c][i]);
      ctx_->inverse_destructive(work.data(), s.b[c].data());
    } else {
      work = a_[c];
      ctx_->inverse_destructive(work.data(), s.u[c].data());
      work = a_[3 + c];
      ctx_->inverse_destructive(work.data(), s.b[c].data());
    }
  }
  return s;
}

void Integrator::to_physical(const Coeffs& a) {
  for (int f = 0; f < 6; ++f) {
    scratch_ = a[f];
    ctx_->inverse_destructive(scratch_.data(), phys_[f].data());
  }
}

// out[target] += sign * (-i k_axis) * product_hat_, i.e. the spectral form of
// -sign * d_axis(product).
void Integrator::accumulate_product(int target, int axis, double sign, Coeffs& out) {
  const auto& waves = ctx_->waves();
  const int nx = ctx_->grid().nx(), ny = ctx_->grid().ny(), nzc = ctx_->nzc();
  Complex* dst = out[target].data();
  const Complex* src = product_hat_.data();
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        const double k = sign * (axis == 0 ? waves.kx(ix) : axis == 1 ? waves.ky(iy) : waves.kz(kz));
        dst[idx] += Complex(k * src[idx].imag(), -k * src[idx].real());
      }
    }
  }
}

void Integrator::nonlinear_primitive(const Coeffs& a, Coeffs& out) {
  to_physical(a);
  const std::size_t n = product_.size();
  const auto transform_product = [&] {
    ctx_->forward(product_.data(), product_hat_.data());
    if (cfg_.dealias) ctx_->dealias(product_hat_.data());
  };
  // Momentum flux S_ij = u_i u_j - b_i b_j, N_u,i = -d_j S_ij.
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double *ui = phys_[i].data(), *uj = phys_[j].data();
      const double *bi = phys_[3 + i].data(), *bj = phys_[3 + j].data();
      for (std::size_t q = 0; q < n; ++q) product_[q] = ui[q] * uj[q] - bi[q] * bj[q];
      transform_product();
      accumulate_product(i, j, 1.0, out);
      if (i != j) accumulate_product(j, i, 1.0, out);
    }
  }
  // Induction flux A_ij = u_j b_i - b_j u_i (antisymmetric), N_b,i = -d_j A_ij.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double *ui = phys_[i].data(), *uj = phys_[j].data();
      const double *bi = phys_[3 + i].data(), *bj = phys_[3 + j].data();
      for (std::size_t q = 0; q < n; ++q) product_[q] = uj[q] * bi[q] - bj[q] * ui[q];
      transform_product();
      accumulate_product(3 + i, j, 1.0, out);
      accumulate_product(3 + j, i, -1.0, out);
    }
  }
}

void Integrator::nonlinear_elsasser(const Coeffs& a, Coeffs& out) {
  to_physical(a);
  const std::size_t n = product_.size();
  // M_ij = w-_j w+_i feeds N+_i = -d_j M_ij and N-_j = -d_i M_ij.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double* wp = phys_[i].data();
      const double* wm = phys_[3 + j].data();
      for (std::size_t q = 0; q < n; ++q) product_[q] = wm[q] * wp[q];
      ctx_->forward(product_.data(), product_hat_.data());
      if (cfg_.dealias) ctx_->dealias(product_hat_.data());
      accumulate_product(i, j, 1.0, out);
      accumulate_product(3 + j, i, 1.0, out);
    }
  }
}

void Integrator::nonlinear(const Coeffs& a, Coeffs& out) {
  for (auto& v : out) std::fill(v.begin(), v.end(), Complex{});
  if (cfg_.form == Form::elsasser) {
    nonlinear_elsasser(a, out);
  } else {
    nonlinear_primitive(a, out);
  }
  ctx_->project(out[0].data(), out[1].data(), out[2].data());
  ctx_->project(out[3].data(), out[4].data(), out[5].data());
}

void Integrator::update_factors(double h) {
  if (h == factor_h_) return;
  const auto& k2 = ctx_->waves().k2;
  const double rates[2] = {cfg_.nu, cfg_.eta};
  for (int r = 0; r < 2; ++r) {
    auto& half = factors_[2 * r];
    auto& full = factors_[2 * r + 1];
    half.resize(k2.size());
    full.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) {
      half[i] = std::exp(-rates[r] * k2[i] * 0.5 * h);
      full[i] = half[i] * half[i];
    }
  }
  factor_h_ = h;
}

void Integrator::advance(double h, double t_new) {
  update_factors(h);
  const auto half_of = [&](int f) -> const std::vector<double>& {
    return factors_[rate(f) == cfg_.nu ? 0 : 2];
  };
  const auto full_of = [&](int f) -> const std::vector<double>& {
    return factors_[rate(f) == cfg_.nu ? 1 : 3];
  };
  const std::size_t ns = ctx_->spectral_size();

  nonlinear(a_, k1_);
  for (int f = 0; f < 6; ++f) {
    const auto& e = half_of(f);
    for (std::size_t i = 0; i < ns; ++i) tmp_[f][i] = e[i] * (a_[f][i] + 0.5 * h * k1_[f][i]);
  }
  nonlinear(tmp_, k2_);
  for (int f = 0; f < 6; ++f) {
    const auto& e = half_of(f);
    for (std::size_t i = 0; i < ns; ++i) tmp_[f][i] = e[i] * a_[f][i] + 0.5 * h * k2_[f][i];
  }
  nonlinear(tmp_, k3_);
  for (int f = 0; f < 6; ++f) {
    const auto& e = half_of(f);
    const auto& e2 = full_of(f);
    for (std::size_t i = 0; i < ns; ++i) tmp_[f][i] = e2[i] * a_[f][i] + h * e[i] * k3_[f][i];
  }
  nonlinear(tmp_, k4_);
  for (int f = 0; f < 6; ++f) {
    const auto& e = half_of(f);
    const auto& e2 = full_of(f);
    for (std::size_t i = 0; i < ns; ++i) {
      tmp_[f][i] = e2[i] * a_[f][i] +
                   h / 6.0 * (e2[i] * k1_[f][i] + 2.0 * e[i] * (k2_[f][i] + k3_[f][i]) + k4_[f][i]);
    }
  }
  ctx_->project(tmp_[0].data(), tmp_[1].data(), tmp_[2].data());
  ctx_->project(tmp_[3].data(), tmp_[4].data(), tmp_[5].data());

  if (!std::all_of(tmp_.begin(), tmp_.end(), all_finite)) {
    const State last = state();
    BlowupDiagnostics diag{t_, kinetic_energy(last), magnetic_energy(last), steps_};
    throw BlowupDetected(t_new, diag);
  }
  std::swap(a_, tmp_);
  t_ = t_new;
  ++steps_;
}

Tendency tendency(const State& s, const SolverConfig& cfg) {
  require_solenoidal(s.u, "velocity");
  require_solenoidal(s.b, "magnetic field");
  Integrator integ(s.grid(), cfg);
  integ.set_state(s);
  Integrator::Coeffs rhs;
  for (auto& v : rhs) v.resize(integ.coefficients()[0].size());
  integ.nonlinear(integ.coefficients(), rhs);

  const auto ctx = SpectralContext::get(s.grid());
  const auto& k2 = ctx->waves().k2;
  const auto& a = integ.coefficients();
  const bool elsasser = cfg.form == Form::elsasser;
  for (int f = 0; f < 6; ++f) {
    const double r = elsasser ? cfg.nu : (f < 3 ? cfg.nu : cfg.eta);
    for (std::size_t i = 0; i < k2.size(); ++i) rhs[f][i] -= r * k2[i] * a[f][i];
  }
  if (elsasser) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < k2.size(); ++i) {
        const Complex p = rhs[c][i], m = rhs[3 + c][i];
        rhs[c][i] = 0.5 * (p + m);
        rhs[3 + c][i] = 0.5 * (p - m);
      }
    }
  }
  Tendency out{VectorField(s.grid()), VectorField(s.grid())};
  for (int c = 0; c < 3; ++c) {
    ctx->inverse_destructive(rhs[c].data(), out.du[c].data());
    ctx->inverse_destructive(rhs[3 + c].data(), out.db[c].data());
  }
  return out;
}

State step(const State& s, const SolverConfig& cfg) {
  Integrator integ(s.grid(), cfg);
  integ.set_state(s);
  integ.advance(cfg.dt);
  return integ.state();
}

std::size_t step_count(double duration, double dt) {
  if (!(duration > 0.0)) return 0;
  const double n = duration / dt;
  const double r = std::round(n);
  if (std::abs(r - n) <= 1e-9 * std::max(1.0, n)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(n));
}

Trajectory simulate(const State& init, const SolverConfig& cfg, const SimulationHooks& hooks) {
  cfg.validate();
  if (cfg.t_end < init.t) throw InvalidConfig("t_end precedes the initial time");
  if (hooks.sample_every < 1) throw InvalidConfig("sample_every must be >= 1");
  if (hooks.checkpoint_every < 0) throw InvalidConfig("checkpoint_every must be >= 0");

  const Grid& grid = init.grid();
  Integrator integ(grid, cfg);
  integ.set_state(init);
  const double t0 = init.t;
  const std::size_t steps = step_count(cfg.t_end - t0, cfg.dt);

  const double min_spacing =
      std::min({grid.spacing(Axis::x), grid.spacing(Axis::y), grid.spacing(Axis::z)});
  bool warned = false;
  const auto cfl_check = [&](const State& s) {
    if (warned) return;
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = std::hypot(s.u[0][i], s.u[1][i], s.u[2][i]);
      const double b = std::hypot(s.b[0][i], s.b[1][i], s.b[2][i]);
      peak = std::max(peak, u + b);
    }
    if (peak > 0.0 && cfg.dt > 0.5 * min_spacing / peak) {
      std::ostringstream msg;
      msg << "dt = " << cfg.dt << " exceeds the advisory CFL limit " << 0.5 * min_spacing / peak
          << " at t = " << s.t;
      if (hooks.on_warning) {
        hooks.on_warning(msg.str());
      } else {
        std::cerr << "warning: " << msg.str() << '\n';
      }
      warned = true;
    }
  };

  Trajectory traj;
  const auto visit = [&](std::size_t k, bool last) {
    const bool sample = k == 0 || last || k % static_cast<std::size_t>(hooks.sample_every) == 0;
    const bool checkpoint =
        hooks.checkpoint_every > 0 &&
        (k == 0 || last || k % static_cast<std::size_t>(hooks.checkpoint_every) == 0);
    if (!sample && !checkpoint) return;
    State s = integ.state();
    if (sample) {
      cfl_check(s);
      traj.times.push_back(s.t);
      if (hooks.on_sample) hooks.on_sample(s, k);
    }
    if (checkpoint && hooks.on_checkpoint) hooks.on_checkpoint(s, k);
    if (sample && hooks.keep_states) traj.states.push_back(std::move(s));
  };

  visit(0, steps == 0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const bool last = k == steps;
    double h = cfg.dt;
    double t_new = t0 + static_cast<double>(k) * cfg.dt;
    if (last) {
      t_new = cfg.t_end;
      const double remaining = cfg.t_end - integ.time();
      if (std::abs(remaining - cfg.dt) > 1e-12 * cfg.dt) h = remaining;
    }
    integ.advance(h, t_new);
    visit(k, last);
  }
  traj.steps = steps;
  traj.final_state = integ.state();
  return traj;
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "taylor_green") return InitKind::taylor_green;
  if (name == "orszag_tang_3d") return InitKind::orszag_tang_3d;
  if (name == "random_bandlimited") return InitKind::random_bandlimited;
  if (name == "shear_decay") return InitKind::shear_decay;
  if (name == "checkpoint") return InitKind::checkpoint;
  throw InvalidConfig("unknown initial-data kind '" + std::string(name) + "'");
}

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::taylor_green: return "taylor_green";
    case InitKind::orszag_tang_3d: return "orszag_tang_3d";
    case InitKind::random_bandlimited: return "random_bandlimited";
    case InitKind::shear_decay: return "shear_decay";
    case InitKind::checkpoint: return "checkpoint";
  }
  return "unknown";
}

namespace {

VectorField random_solenoidal(const Grid& grid, double k_max, double energy, std::mt19937_64& rng) {
  const auto ctx = SpectralContext::get(grid);
  const auto& waves = ctx->waves();
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t ns = ctx->spectral_size();
  std::array<ComplexVector, 3> c{ComplexVector(ns), ComplexVector(ns),
                                        ComplexVector(ns)};
  AlignedVector<double> noise(grid.size());
  for (int comp = 0; comp < 3; ++comp) {
    for (double& x : noise) x = normal(rng);
    ctx->forward(noise.data(), c[comp].data());
  }
  const double kmax2 = k_max * k_max;
  const int nx = grid.nx(), ny = grid.ny(), nzc = ctx->nzc();
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        const double m2 = static_cast<double>(waves.mode_x[ix]) * waves.mode_x[ix] +
                          static_cast<double>(waves.mode_y[iy]) * waves.mode_y[iy] +
                          static_cast<double>(waves.mode_z[kz]) * waves.mode_z[kz];
        if (m2 == 0.0 || m2 > kmax2 || waves.nyquist[idx]) {
          for (auto& comp : c) comp[idx] = 0.0;
        }
      }
    }
  }
  ctx->project(c[0].data(), c[1].data(), c[2].data());
  VectorField v(grid);
  for (int comp = 0; comp < 3; ++comp) ctx->inverse_destructive(c[comp].data(), v[comp].data());
  const double e = inner_product(v, v);
  if (!(e > 0.0)) throw InvalidConfig("random_bandlimited: no modes with 0 < |k| <= k_max");
  v *= std::sqrt(energy * grid.volume() / 2.0 / e);
  return v;
}

}  // namespace

State initial_data(InitKind kind, const InitParams& params, const Grid& grid, std::uint64_t seed) {
  const double k0 = grid.wavenumber_unit();
  const double a = params.amplitude;
  const double eps = params.epsilon;
  switch (kind) {
    case InitKind::taylor_green: {
      auto u = VectorField::sample(grid, [&](double x, double y, double) {
        return std::array<double, 3>{a * std::cos(k0 * x) * std::sin(k0 * y),
                                     -a * std::sin(k0 * x) * std::cos(k0 * y), 0.0};
      });
      return State{std::move(u), VectorField(grid), 0.0};
    }
    case InitKind::orszag_tang_3d: {
      auto u = VectorField::sample(grid, [&](double x, double y, double z) {
        return std::array<double, 3>{a * (-std::sin(k0 * y) + eps * std::sin(k0 * z)),
                                     a * std::sin(k0 * x), a * eps * std::sin(k0 * x)};
      });
      auto b = VectorField::sample(grid, [&](double x, double y, double z) {
        return std::array<double, 3>{-a * std::sin(k0 * y),
                                     a * (std::sin(2.0 * k0 * x) + eps * std::sin(k0 * z)),
                                     a * eps * std::sin(k0 * y)};
      });
      return State{std::move(u), std::move(b), 0.0};
    }
    case InitKind::shear_decay: {
      auto u = VectorField::sample(grid, [&](double, double, double z) {
        return std::array<double, 3>{a * std::sin(k0 * z), 0.0, 0.0};
      });
      auto b = VectorField::sample(grid, [&](double, double, double z) {
        return std::array<double, 3>{0.0, a * std::sin(k0 * z), 0.0};
      });
      return State{std::move(u), std::move(b), 0.0};
    }
    case InitKind::random_bandlimited: {
      if (!(params.k_max >= 1.0)) throw InvalidConfig("random_bandlimited needs k_max >= 1");
      if (!(params.energy > 0.0)) throw InvalidConfig("random_bandlimited needs energy > 0");
      std::mt19937_64 rng(seed);
      VectorField u = random_solenoidal(grid, params.k_max, params.energy, rng);
      VectorField b = random_solenoidal(grid, params.k_max, params.energy, rng);
      return State{std::move(u), std::move(b), 0.0};
    }
    case InitKind::checkpoint: {
      if (params.checkpoint_path.empty()) throw InvalidConfig("checkpoint init needs a path");
      return read_checkpoint(params.checkpoint_path, grid).state;
    }
  }
  throw InvalidConfig("unhandled initial-data kind");
}

}  // namespace mhdreg
