#include "mhdreg/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mhdreg/errors.hpp"
#include "mhdreg/spectral.hpp"
#include "parse_util.hpp"

namespace mhdreg {
namespace {

constexpr double kTol = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Term>
double integrate_fn(const Grid& g, const Term& term) {
  return detail::pairwise_sum(0, g.size(), term) * g.cell_volume();
}

// Spectral coefficients of a vector field, kept so that several derivatives
// can be taken from one forward transform per component.
class SpectralVector {
 public:
  SpectralVector(std::shared_ptr<const SpectralContext> ctx, const VectorField& v) : ctx_(std::move(ctx)) {
    for (int c = 0; c < 3; ++c) {
      c_[c].resize(ctx_->spectral_size());
      ctx_->forward(v[c].data(), c_[c].data());
    }
  }

  // d_a d_b v_c; pass only `a` for a first derivative.
  ScalarField derivative(int c, Axis a, const Axis* b = nullptr) const {
    work_ = c_[c];
    ctx_->differentiate(work_.data(), a);
    if (b) ctx_->differentiate(work_.data(), *b);
    ScalarField out(ctx_->grid());
    ctx_->inverse_destructive(work_.data(), out.data());
    return out;
  }

  TensorField gradient() const {
    const Grid& g = ctx_->grid();
    TensorField t{VectorField(g), VectorField(g), VectorField(g)};
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) t[j][i] = derivative(i, static_cast<Axis>(j));
    }
    return t;
  }

  // ||grad d_z v||_2^2 by Parseval, Nyquist planes excluded as in derivative().
  double grad_z_derivative_sq() const {
    const Grid& g = ctx_->grid();
    const auto& waves = ctx_->waves();
    const int nx = g.nx(), ny = g.ny(), nzc = ctx_->nzc();
    double s = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        for (int kz = 0; kz < nzc; ++kz, ++idx) {
          if (waves.nyquist[idx] || kz == 0) continue;
          const double kzv = waves.kz(kz);
          const double w = 2.0 * waves.k2[idx] * kzv * kzv;
          s += w * (std::norm(c_[0][idx]) + std::norm(c_[1][idx]) + std::norm(c_[2][idx]));
        }
      }
    }
    return s * g.volume();
  }

  VectorField laplacian() const {
    const Grid& g = ctx_->grid();
    const auto& waves = ctx_->waves();
    VectorField out(g);
    for (int c = 0; c < 3; ++c) {
      work_ = c_[c];
      for (std::size_t i = 0; i < work_.size(); ++i) {
        work_[i] = waves.nyquist[i] ? Complex{} : -waves.k2[i] * work_[i];
      }
      ctx_->inverse_destructive(work_.data(), out[c].data());
    }
    return out;
  }

 private:
  std::shared_ptr<const SpectralContext> ctx_;
  std::array<ComplexVector, 3> c_;
  mutable ComplexVector work_;
};

double frob_sq(const TensorField& g, std::size_t q) {
  double s = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) s += g[j][i][q] * g[j][i][q];
  }
  return s;
}

double dot(const VectorField& a, const VectorField& b, std::size_t q) {
  return a[0][q] * b[0][q] + a[1][q] * b[1][q] + a[2][q] * b[2][q];
}

// (a . grad) v at point q, component i, with g[j][i] = d_j v_i.
double advect(const VectorField& a, const TensorField& g, int i, std::size_t q) {
  return a[0][q] * g[0][i][q] + a[1][q] * g[1][i][q] + a[2][q] * g[2][i][q];
}

// int (a . grad v) . c
double advect_integral(const VectorField& a, const TensorField& g, const VectorField& c) {
  return integrate_fn(a.grid(), [&](std::size_t q) {
    return advect(a, g, 0, q) * c[0][q] + advect(a, g, 1, q) * c[1][q] + advect(a, g, 2, q) * c[2][q];
  });
}

TensorField sum(const TensorField& a, const TensorField& b, double sign) {
  TensorField out = a;
  for (int j = 0; j < 3; ++j) {
    if (sign > 0) {
      out[j] += b[j];
    } else {
      out[j] -= b[j];
    }
  }
  return out;
}

// grad |w|^2 = 2 w_i d_j w_i.
VectorField grad_sq_magnitude(const VectorField& w, const TensorField& g) {
  VectorField out(w.grid());
  for (std::size_t q = 0; q < w.grid().size(); ++q) {
    for (int j = 0; j < 3; ++j) {
      out[j][q] = 2.0 * (w[0][q] * g[j][0][q] + w[1][q] * g[j][1][q] + w[2][q] * g[j][2][q]);
    }
  }
  return out;
}

struct L4Pieces {
  double w4 = 0.0, grad_sq_sq = 0.0, w_grad_w = 0.0, j = 0.0;
};

L4Pieces l4_pieces(const VectorField& w, const TensorField& g, const ScalarField& p) {
  const VectorField gs = grad_sq_magnitude(w, g);
  const Grid& grid = w.grid();
  L4Pieces out;
  out.w4 = integrate_fn(grid, [&](std::size_t q) {
    const double s = dot(w, w, q);
    return s * s;
  });
  out.grad_sq_sq = integrate_fn(grid, [&](std::size_t q) { return dot(gs, gs, q); });
  out.w_grad_w = integrate_fn(grid, [&](std::size_t q) { return dot(w, w, q) * frob_sq(g, q); });
  out.j = integrate_fn(grid, [&](std::size_t q) { return p[q] * dot(w, gs, q); });
  return out;
}

double max_trace(const TensorField& g) {
  double m = 0.0;
  for (std::size_t q = 0; q < g[0].grid().size(); ++q) {
    m = std::max(m, std::abs(g[0][0][q] + g[1][1][q] + g[2][2][q]));
  }
  return m;
}

}  // namespace

CriterionKind parse_criterion_kind(std::string_view name) {
  if (name == "velocity_z" || name == "velocity") return CriterionKind::velocity_z;
  if (name == "pressure_z" || name == "pressure") return CriterionKind::pressure_z;
  if (name == "gradient_velocity" || name == "gradient") return CriterionKind::gradient_velocity;
  throw InvalidExponent("unknown criterion kind '" + std::string(name) + "'");
}

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::velocity_z: return "velocity_z";
    case CriterionKind::pressure_z: return "pressure_z";
    case CriterionKind::gradient_velocity: return "gradient_velocity";
  }
  return "unknown";
}

CriterionSpec CriterionSpec::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw InvalidExponent("criterion '" + std::string(text) + "' is not kind:alpha:beta");
  }
  CriterionSpec spec;
  spec.kind = parse_criterion_kind(detail::trim(text.substr(0, c1)));
  const auto a = detail::parse_real(text.substr(c1 + 1, c2 - c1 - 1));
  const auto b = detail::parse_real(text.substr(c2 + 1));
  if (!a || !b) throw InvalidExponent("criterion '" + std::string(text) + "' has a malformed exponent");
  spec.alpha = *a;
  spec.beta = *b;
  spec.validate();
  return spec;
}

void CriterionSpec::validate() const {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InvalidExponent("criterion alpha must be finite and >= 1");
  }
  if (!(beta >= 1.0)) throw InvalidExponent("criterion beta must be >= 1 or inf");
}

std::string to_string(const CriterionSpec& spec) {
  std::ostringstream s;
  s.precision(17);
  s << to_string(spec.kind) << ':' << spec.alpha << ':';
  if (std::isinf(spec.beta)) {
    s << "inf";
  } else {
    s << spec.beta;
  }
  return s.str();
}

Admissibility check_admissible(const CriterionSpec& spec) {
  const double scaling = 3.0 / spec.alpha + (std::isinf(spec.beta) ? 0.0 : 2.0 / spec.beta);
  switch (spec.kind) {
    case CriterionKind::velocity_z: {
      const double slack = 1.0 - scaling;
      return {spec.alpha >= 3.0 - kTol && slack >= -kTol, std::abs(slack) <= kTol ? 0.0 : slack};
    }
    case CriterionKind::pressure_z: {
      const double slack = 1.75 - scaling;
      return {spec.alpha >= 12.0 / 7.0 - kTol && slack >= -kTol, std::abs(slack) <= kTol ? 0.0 : slack};
    }
    case CriterionKind::gradient_velocity: {
      const double slack = 2.0 - scaling;
      const bool on_line = std::abs(slack) <= kTol;
      return {on_line && spec.beta > 1.0 && spec.beta <= 2.0 + kTol, on_line ? 0.0 : slack};
    }
  }
  return {};
}

HolderExponents HolderExponents::from_alpha(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidExponent("alpha must be finite and >= 1");
  HolderExponents e;
  e.alpha = alpha;
  e.r = 6.0 * alpha / (3.0 * alpha - 2.0);
  e.q = alpha > 1.0 ? 2.0 / (3.0 * (1.0 - 1.0 / alpha)) : kInf;
  e.gamma = alpha > 3.0 ? 2.0 / (1.0 - 3.0 / alpha) : kInf;
  e.lambda_p = 2.0 / (1.75 - 1.0 / alpha);
  e.growth = (2.0 * alpha - 6.0) / (2.0 * alpha - 3.0);
  return e;
}

SampleRecord sample(const State& state, const ScalarField& pressure,
                    const std::vector<CriterionSpec>& specs) {
  const Grid& grid = state.grid();
  require_same_grid(grid, state.b.grid(), "sample");
  require_same_grid(grid, pressure.grid(), "sample");
  const auto ctx = SpectralContext::get(grid);
  const SpectralVector su(ctx, state.u), sb(ctx, state.b);
  const VectorField& u = state.u;
  const VectorField& b = state.b;
  const TensorField gu = su.gradient(), gb = sb.gradient();
  const VectorField& uz = gu[2];
  const VectorField& bz = gb[2];
  const VectorField lu = su.laplacian(), lb = sb.laplacian();

  SampleRecord r;
  r.t = state.t;
  r.kinetic_energy = inner_product(u, u);
  r.magnetic_energy = inner_product(b, b);
  r.grad_u_sq = inner_product(gu, gu);
  r.grad_b_sq = inner_product(gb, gb);
  r.uz_sq = inner_product(uz, uz);
  r.bz_sq = inner_product(bz, bz);
  r.grad_uz_sq = su.grad_z_derivative_sq();
  r.grad_bz_sq = sb.grad_z_derivative_sq();
  r.lap_u_sq = inner_product(lu, lu);
  r.lap_b_sq = inner_product(lb, lb);

  r.zderiv_terms[0] = -advect_integral(uz, gu, uz);
  r.zderiv_terms[1] = advect_integral(bz, gb, uz);
  r.zderiv_terms[2] = -advect_integral(uz, gb, bz);
  r.zderiv_terms[3] = advect_integral(bz, gu, bz);

  // Pairing the momentum equation with -Lap u and the induction equation
  // with -Lap b.
  r.h1_rhs = advect_integral(u, gu, lu) - advect_integral(b, gb, lu) + advect_integral(u, gb, lb) -
             advect_integral(b, gu, lb);

  const VectorField wp = u + b, wm = u - b;
  const TensorField gwp = sum(gu, gb, 1.0), gwm = sum(gu, gb, -1.0);
  const L4Pieces lp = l4_pieces(wp, gwp, pressure), lm = l4_pieces(wm, gwm, pressure);
  r.wp4 = lp.w4;
  r.wm4 = lm.w4;
  r.grad_wp_sq_sq = lp.grad_sq_sq;
  r.grad_wm_sq_sq = lm.grad_sq_sq;
  r.wp_grad_wp = lp.w_grad_w;
  r.wm_grad_wm = lm.w_grad_w;
  r.l4_terms[0] = lp.j;
  r.l4_terms[1] = lm.j;

  r.div_u_max = max_trace(gu);
  r.div_b_max = max_trace(gb);

  r.criterion_norms.reserve(specs.size());
  for (const auto& spec : specs) {
    spec.validate();
    switch (spec.kind) {
      case CriterionKind::velocity_z:
        r.criterion_norms.push_back(vector_lp_norm(uz, spec.alpha));
        break;
      case CriterionKind::pressure_z:
        r.criterion_norms.push_back(lp_norm(derivative(pressure, Axis::z), spec.alpha));
        break;
      case CriterionKind::gradient_velocity:
        r.criterion_norms.push_back(tensor_lp_norm(gu, spec.alpha));
        break;
    }
  }
  return r;
}

SampleRecord sample(const State& state, const std::vector<CriterionSpec>& specs, bool dealias) {
  const ScalarField p = pressure_solve(state.u - state.b, state.u + state.b, dealias);
  return sample(state, p, specs);
}

namespace {

// Integral over [a, b] of the polynomial through (t[i], f[i]), i < n <= 4.
// Two-point Gauss-Legendre is exact up to cubics.
double interval_integral(const double* t, const double* f, std::size_t n, double a, double b) {
  const auto eval = [&](double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) w *= (x - t[j]) / (t[i] - t[j]);
      }
      sum += w * f[i];
    }
    return sum;
  };
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double off = half / std::sqrt(3.0);
  return half * (eval(mid - off) + eval(mid + off));
}

}  // namespace

MonitorSeries::MonitorSeries(std::vector<CriterionSpec> specs, double nu, double eta)
    : specs_(std::move(specs)), nu_(nu), eta_(eta) {
  for (const auto& s : specs_) s.validate();
}

void MonitorSeries::accumulate(SampleRecord record) {
  if (record.criterion_norms.size() != specs_.size()) {
    throw std::invalid_argument("sample carries " + std::to_string(record.criterion_norms.size()) +
                                " criterion norms for " + std::to_string(specs_.size()) + " specs");
  }
  if (!std::isfinite(record.t) || (!samples_.empty() && !(record.t > samples_.back().t))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sample time " << record.t << " does not follow "
        << (samples_.empty() ? 0.0 : samples_.back().t);
    throw TimeOrder(msg.str());
  }
  std::vector<double> m(specs_.size(), 0.0);
  double d = 0.0, e = 0.0;
  if (samples_.empty()) {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      if (std::isinf(specs_[i].beta)) m[i] = record.criterion_norms[i];
    }
  } else {
    const SampleRecord& prev = samples_.back();
    const double h = record.t - prev.t;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const double beta = specs_[i].beta;
      const double a = prev.criterion_norms[i], c = record.criterion_norms[i];
      if (std::isinf(beta)) {
        m[i] = std::max(m_.back()[i], c);
      } else {
        m[i] = m_.back()[i] + 0.5 * h * (std::pow(a, beta) + std::pow(c, beta));
      }
    }
    d = d_.back() + 0.5 * h * (prev.grad_uz_sq + prev.grad_bz_sq + record.grad_uz_sq + record.grad_bz_sq);
  }
  samples_.push_back(std::move(record));
  const std::size_t n = samples_.size() - 1;
  if (n > 0) {
    const auto rate = [&](std::size_t k) {
      return nu_ * samples_[k].grad_u_sq + eta_ * samples_[k].grad_b_sq;
    };
    double t[4], f[4];
    const std::size_t first = n >= 3 ? n - 3 : 0, count = std::min<std::size_t>(n + 1, 4);
    for (std::size_t i = 0; i < count; ++i) {
      t[i] = samples_[first + i].t;
      f[i] = rate(first + i);
    }
    if (n == 3) {
      energy_settled_ = interval_integral(t, f, 4, t[0], t[1]) + interval_integral(t, f, 4, t[1], t[2]);
    } else if (n > 3) {
      energy_settled_ += interval_integral(t, f, 4, t[1], t[2]);
    }
    if (n < 3) {
      e = 0.0;
      for (std::size_t j = 0; j < n; ++j) e += interval_integral(t, f, count, t[j], t[j + 1]);
    } else {
      e = energy_settled_ + interval_integral(t, f, 4, t[2], t[3]);
    }
  }
  m_.push_back(std::move(m));
  d_.push_back(d);
  energy_diss_.push_back(e);
}

std::vector<double> MonitorSeries::times() const {
  std::vector<double> t;
  t.reserve(samples_.size());
  for (const auto& s : samples_) t.push_back(s.t);
  return t;
}

double MonitorSeries::criterion_integral(std::size_t spec, std::size_t k) const {
  return m_.at(k).at(spec);
}

double MonitorSeries::criterion_integral(std::size_t spec) const {
  if (m_.empty()) return 0.0;
  return m_.back().at(spec);
}

double energy_residual(const MonitorSeries& series) {
  if (series.empty()) throw DegenerateInput("energy_residual of an empty series");
  return energy_residual(series, series.size() - 1);
}

double energy_residual(const MonitorSeries& series, std::size_t k) {
  if (series.empty()) throw DegenerateInput("energy_residual of an empty series");
  const SampleRecord& s0 = series[0];
  const SampleRecord& sk = series.samples().at(k);
  const double e0 = s0.kinetic_energy + s0.magnetic_energy;
  const double ek = sk.kinetic_energy + sk.magnetic_energy;
  const double defect = std::abs(ek + 2.0 * series.energy_dissipation(k) - e0);
  return e0 > 0.0 ? defect / e0 : defect;
}

namespace {

struct IdentityPoint {
  double x, coeff, d, rhs;
};

IdentityPoint identity_point(const SampleRecord& s, Identity which, double nu, double eta) {
  switch (which) {
    case Identity::zderiv:
      return {s.uz_sq + s.bz_sq, 0.5, nu * s.grad_uz_sq + eta * s.grad_bz_sq, s.zderiv_rhs()};
    case Identity::h1:
      return {s.grad_u_sq + s.grad_b_sq, 0.5, nu * s.lap_u_sq + eta * s.lap_b_sq, s.h1_rhs};
    case Identity::l4: {
      const double d = nu * (0.5 * (s.grad_wp_sq_sq + s.grad_wm_sq_sq) + s.wp_grad_wp + s.wm_grad_wm);
      return {s.wp4 + s.wm4, 0.25, d, s.l4_rhs()};
    }
  }
  return {};
}

// Derivative at t[k] of the quadratic through (t[a], t[a+1], t[a+2]).
double lagrange_derivative(const double* t, const double* x, std::size_t a, std::size_t k) {
  const double t0 = t[a], t1 = t[a + 1], t2 = t[a + 2], tk = t[k];
  const double l0 = ((tk - t1) + (tk - t2)) / ((t0 - t1) * (t0 - t2));
  const double l1 = ((tk - t0) + (tk - t2)) / ((t1 - t0) * (t1 - t2));
  const double l2 = ((tk - t0) + (tk - t1)) / ((t2 - t0) * (t2 - t1));
  return l0 * x[a] + l1 * x[a + 1] + l2 * x[a + 2];
}

}  // namespace

std::vector<double> identity_residuals(const MonitorSeries& series, Identity which,
                                       std::size_t first, std::size_t count) {
  if (first > series.size() || count > series.size() - first) {
    throw std::out_of_range("identity window exceeds the series");
  }
  if (count < 3) {
    throw WindowTooShort("identity residual needs three samples, window has " + std::to_string(count));
  }
  if (which == Identity::l4 && series.nu() != series.eta()) {
    return std::vector<double>(count, kNaN);
  }
  std::vector<double> t(count), x(count);
  std::vector<IdentityPoint> pts(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts[k] = identity_point(series[first + k], which, series.nu(), series.eta());
    t[k] = series[first + k].t;
    x[k] = pts[k].x;
  }
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t a = k == 0 ? 0 : (k + 1 == count ? count - 3 : k - 1);
    const double dxdt = lagrange_derivative(t.data(), x.data(), a, k);
    out[k] = std::abs(pts[k].coeff * dxdt + pts[k].d - pts[k].rhs) / (pts[k].x + 1.0);
  }
  return out;
}

std::vector<double> identity_residuals(const MonitorSeries& series, Identity which) {
  return identity_residuals(series, which, 0, series.size());
}

double identity_residual(const MonitorSeries& series, Identity which) {
  const auto r = identity_residuals(series, which);
  double m = 0.0;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    if (std::isnan(r[k])) return kNaN;
    m = std::max(m, r[k]);
  }
  return m;
}

double h1_cubic_bound_ratio(const State& state) {
  const TensorField gu = gradient(state.u), gb = gradient(state.b);
  const VectorField lu = laplacian(state.u), lb = laplacian(state.b);
  const double cubic = advect_integral(state.u, gu, lu) - advect_integral(state.b, gb, lu) +
                       advect_integral(state.u, gb, lb) - advect_integral(state.b, gu, lb);
  const double nu3 = tensor_lp_norm(gu, 3.0), nb3 = tensor_lp_norm(gb, 3.0);
  const double bound = nu3 * nu3 * nu3 + 3.0 * nu3 * nb3 * nb3;
  if (!(bound > 0.0)) return kNaN;
  return std::abs(cubic) / bound;
}

double HolderReport::max_constant_one_ratio() const {
  double m = 0.0;
  for (const auto& e : entries) {
    if (e.constant_one && e.defined) m = std::max(m, e.ratio);
  }
  return m;
}

bool HolderReport::constant_unknown_finite() const {
  return std::all_of(entries.begin(), entries.end(), [](const HolderEntry& e) {
    return e.constant_one || !e.defined || std::isfinite(e.ratio);
  });
}

HolderReport holder_chain_check(const State& state, const ScalarField& pressure,
                                const HolderExponents& exps, HolderChain chain) {
  const double alpha = exps.alpha;
  const bool velocity = chain != HolderChain::pressure;
  const bool press = chain != HolderChain::velocity;
  if (velocity && !(alpha >= 3.0)) throw InvalidExponent("velocity Hoelder chain needs alpha >= 3");
  if (press && !(alpha >= 12.0 / 7.0)) throw InvalidExponent("pressure Hoelder chain needs alpha >= 12/7");
  const Grid& grid = state.grid();
  require_same_grid(grid, pressure.grid(), "holder_chain_check");

  HolderReport report;
  report.exponents = exps;
  const auto add = [&](std::string name, double lhs, double rhs, bool constant_one) {
    HolderEntry e{std::move(name), lhs, rhs, kNaN, false, constant_one};
    if (rhs > 0.0 && std::isfinite(rhs)) {
      e.defined = true;
      e.ratio = lhs / rhs;
    }
    report.entries.push_back(std::move(e));
  };

  const TensorField gu = gradient(state.u), gb = gradient(state.b);
  if (velocity) {
    const VectorField& uz = gu[2];
    const VectorField& bz = gb[2];
    const TensorField guz = gradient(uz), gbz = gradient(bz);
    const double r = exps.r;
    const double u3a = vector_lp_norm(state.u, 3.0 * alpha);
    // |I1| in the form int (u_z . grad u_z) . u.
    add("I1", std::abs(advect_integral(uz, guz, state.u)),
        tensor_lp_norm(guz, 2.0) * vector_lp_norm(uz, r) * u3a, true);
    add("I2", std::abs(advect_integral(bz, gb, uz)),
        tensor_lp_norm(gb, 2.0) * vector_lp_norm(uz, alpha) *
            vector_lp_norm(bz, alpha > 2.0 ? 2.0 * alpha / (alpha - 2.0) : kInf),
        true);
    // |I4| in the form int (b_z . grad b_z) . u.
    add("I4", std::abs(advect_integral(bz, gbz, state.u)),
        tensor_lp_norm(gbz, 2.0) * vector_lp_norm(bz, r) * u3a, true);
  }
  if (press) {
    const VectorField wp = state.u + state.b, wm = state.u - state.b;
    const TensorField gwp = sum(gu, gb, 1.0);
    const VectorField gs = grad_sq_magnitude(wp, gwp);
    const double j1 = integrate_fn(grid, [&](std::size_t q) { return pressure[q] * dot(wp, gs, q); });
    const double p4 = lp_norm(pressure, 4.0);
    add("J1", std::abs(j1), p4 * vector_lp_norm(wp, 4.0) * vector_lp_norm(gs, 2.0), true);

    const double lam = exps.lambda_p;
    const VectorField gp(derivative(pressure, Axis::x), derivative(pressure, Axis::y),
                         derivative(pressure, Axis::z));
    const double gp_lam = vector_lp_norm(gp, lam);
    add("p_L4_anisotropic", p4,
        std::cbrt(lp_norm(gp[2], alpha)) * std::pow(gp_lam, 2.0 / 3.0), false);
    add("grad_p_lambda", gp_lam,
        vector_lp_norm(wm, 2.0 * lam / (2.0 - lam)) * tensor_lp_norm(gwp, 2.0), false);
  }
  return report;
}

}  // namespace mhdreg
