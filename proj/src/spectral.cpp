#include "mhdreg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <initializer_list>
#include <map>
#include <mutex>
#include <tuple>

#include "mhdreg/errors.hpp"

namespace mhdreg {
namespace {

// FFTW's planner is not thread safe; plan creation and destruction go
// through this lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kSolenoidalTolerance = 1e-8;

int mode_number(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

SpectralContext::SpectralContext(const Grid& grid)
    : grid_(grid),
      spectral_size_(static_cast<std::size_t>(grid.nx()) * grid.ny() * (grid.nz() / 2 + 1)) {
  const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz(), nzc = nz / 2 + 1;
  waves_.unit = grid.wavenumber_unit();
  waves_.mode_x.resize(nx);
  waves_.mode_y.resize(ny);
  waves_.mode_z.resize(nzc);
  for (int i = 0; i < nx; ++i) waves_.mode_x[i] = mode_number(i, nx);
  for (int i = 0; i < ny; ++i) waves_.mode_y[i] = mode_number(i, ny);
  for (int i = 0; i < nzc; ++i) waves_.mode_z[i] = i;

  waves_.k2.resize(spectral_size_);
  waves_.nyquist.resize(spectral_size_);
  waves_.dealias_keep.resize(spectral_size_);
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    const int mx = waves_.mode_x[ix];
    for (int iy = 0; iy < ny; ++iy) {
      const int my = waves_.mode_y[iy];
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        const int mz = waves_.mode_z[kz];
        const double kx = waves_.unit * mx, ky = waves_.unit * my, kzv = waves_.unit * mz;
        waves_.k2[idx] = kx * kx + ky * ky + kzv * kzv;
        waves_.nyquist[idx] = (ix == nx / 2 || iy == ny / 2 || kz == nz / 2) ? 1 : 0;
        waves_.dealias_keep[idx] =
            (3 * std::abs(mx) < nx && 3 * std::abs(my) < ny && 3 * std::abs(mz) < nz) ? 1 : 0;
      }
    }
  }

  AlignedVector<double> real_buf(grid.size());
  ComplexVector complex_buf(spectral_size_);
  auto* cbuf = reinterpret_cast<fftw_complex*>(complex_buf.data());
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_3d(nx, ny, nz, real_buf.data(), cbuf, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_3d(nx, ny, nz, cbuf, real_buf.data(), FFTW_ESTIMATE);
  forward_plan_unaligned_ =
      fftw_plan_dft_r2c_3d(nx, ny, nz, real_buf.data(), cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_unaligned_ =
      fftw_plan_dft_c2r_3d(nx, ny, nz, cbuf, real_buf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!forward_plan_ || !inverse_plan_ || !forward_plan_unaligned_ || !inverse_plan_unaligned_) {
    throw UnsupportedGrid("FFTW could not plan transforms for this grid");
  }
}

SpectralContext::~SpectralContext() {
  std::lock_guard lock(planner_mutex());
  for (void* p : {forward_plan_, inverse_plan_, forward_plan_unaligned_, inverse_plan_unaligned_}) {
    if (p != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(p));
  }
}

std::shared_ptr<const SpectralContext> SpectralContext::get(const Grid& grid) {
  using Key = std::tuple<int, int, int, double>;
  static std::mutex cache_mutex;
  static std::map<Key, std::weak_ptr<const SpectralContext>> cache;
  const Key key{grid.nx(), grid.ny(), grid.nz(), grid.length()};
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto ctx = it->second.lock()) return ctx;
  }
  auto ctx = std::make_shared<const SpectralContext>(grid);
  cache[key] = ctx;
  return ctx;
}

void SpectralContext::forward(const double* in, Complex* out) const {
  // r2c does not modify its input.
  double* rin = const_cast<double*>(in);
  auto* cout = reinterpret_cast<fftw_complex*>(out);
  const bool aligned = fftw_alignment_of(rin) == 0 && fftw_alignment_of(reinterpret_cast<double*>(out)) == 0;
  fftw_execute_dft_r2c(static_cast<fftw_plan>(aligned ? forward_plan_ : forward_plan_unaligned_), rin, cout);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < spectral_size_; ++i) out[i] *= scale;
}

void SpectralContext::inverse_destructive(Complex* in, double* out) const {
  const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(in)) == 0 && fftw_alignment_of(out) == 0;
  fftw_execute_dft_c2r(static_cast<fftw_plan>(aligned ? inverse_plan_ : inverse_plan_unaligned_),
                       reinterpret_cast<fftw_complex*>(in), out);
}

void SpectralContext::differentiate(Complex* c, Axis axis) const {
  const int nx = grid_.nx(), ny = grid_.ny(), nzc = this->nzc();
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        if (waves_.nyquist[idx]) {
          c[idx] = 0.0;
          continue;
        }
        const double k = axis == Axis::x ? waves_.kx(ix) : axis == Axis::y ? waves_.ky(iy) : waves_.kz(kz);
        c[idx] = Complex(-k * c[idx].imag(), k * c[idx].real());
      }
    }
  }
}

void SpectralContext::dealias(Complex* c) const {
  for (std::size_t i = 0; i < spectral_size_; ++i) {
    if (!waves_.dealias_keep[i]) c[i] = 0.0;
  }
}

void SpectralContext::zero_nyquist(Complex* c) const {
  for (std::size_t i = 0; i < spectral_size_; ++i) {
    if (waves_.nyquist[i]) c[i] = 0.0;
  }
}

void SpectralContext::project(Complex* cx, Complex* cy, Complex* cz) const {
  const int nx = grid_.nx(), ny = grid_.ny(), nzc = this->nzc();
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    const double kx = waves_.kx(ix);
    for (int iy = 0; iy < ny; ++iy) {
      const double ky = waves_.ky(iy);
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        if (waves_.nyquist[idx]) {
          cx[idx] = cy[idx] = cz[idx] = 0.0;
          continue;
        }
        const double k2 = waves_.k2[idx];
        if (k2 == 0.0) continue;
        const double kzv = waves_.kz(kz);
        const Complex kdotc = kx * cx[idx] + ky * cy[idx] + kzv * cz[idx];
        const Complex f = kdotc / k2;
        cx[idx] -= kx * f;
        cy[idx] -= ky * f;
        cz[idx] -= kzv * f;
      }
    }
  }
}

void SpectralContext::divergence(const Complex* cx, const Complex* cy, const Complex* cz,
                                 Complex* out) const {
  const int nx = grid_.nx(), ny = grid_.ny(), nzc = this->nzc();
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    const double kx = waves_.kx(ix);
    for (int iy = 0; iy < ny; ++iy) {
      const double ky = waves_.ky(iy);
      for (int kz = 0; kz < nzc; ++kz, ++idx) {
        if (waves_.nyquist[idx]) {
          out[idx] = 0.0;
          continue;
        }
        const Complex s = kx * cx[idx] + ky * cy[idx] + waves_.kz(kz) * cz[idx];
        out[idx] = Complex(-s.imag(), s.real());
      }
    }
  }
}

double SpectralContext::parseval(const Complex* c) const {
  const int nz = grid_.nz(), nzc = this->nzc();
  const double s = detail::pairwise_sum(0, spectral_size_, [&](std::size_t i) {
    const int kz = static_cast<int>(i % nzc);
    const double w = (kz == 0 || kz == nz / 2) ? 1.0 : 2.0;
    return w * std::norm(c[i]);
  });
  return grid_.volume() * s;
}

SpectrumField::SpectrumField(const Grid& grid)
    : grid_(grid),
      coeffs_(static_cast<std::size_t>(grid.nx()) * grid.ny() * (grid.nz() / 2 + 1)) {}

Complex SpectrumField::mode(int mx, int my, int mz) const {
  const int nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz();
  if (mz < 0 && mz != -nz / 2) return std::conj(mode(-mx, -my, -mz));
  const int ix = (mx % nx + nx) % nx;
  const int iy = (my % ny + ny) % ny;
  const int kz = std::abs(mz);
  return coeffs_[(static_cast<std::size_t>(ix) * ny + iy) * (nz / 2 + 1) + kz];
}

void SpectrumField::set_mode(int mx, int my, int mz, Complex value) {
  const int nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz(), nzc = nz / 2 + 1;
  if (mz < 0 && mz != -nz / 2) {
    set_mode(-mx, -my, -mz, std::conj(value));
    return;
  }
  const int kz = std::abs(mz);
  const auto at = [&](int a, int b) -> Complex& {
    const int ix = (a % nx + nx) % nx;
    const int iy = (b % ny + ny) % ny;
    return coeffs_[(static_cast<std::size_t>(ix) * ny + iy) * nzc + kz];
  };
  if (kz == 0 || kz == nz / 2) {
    Complex& self = at(mx, my);
    Complex& partner = at(-mx, -my);
    if (&self == &partner) {
      self = value.real();
    } else {
      self = value;
      partner = std::conj(value);
    }
  } else {
    at(mx, my) = value;
  }
}

SpectrumField dft_forward(const ScalarField& f) {
  const auto ctx = SpectralContext::get(f.grid());
  SpectrumField out(f.grid());
  ctx->forward(f.data(), out.data());
  return out;
}

ScalarField dft_inverse(const SpectrumField& spectrum) {
  const auto ctx = SpectralContext::get(spectrum.grid());
  ComplexVector scratch(spectrum.coeffs().begin(), spectrum.coeffs().end());
  ScalarField out(spectrum.grid());
  ctx->inverse_destructive(scratch.data(), out.data());
  return out;
}

double hermitian_defect(const SpectrumField& spectrum) {
  const Grid& g = spectrum.grid();
  double defect = 0.0;
  for (int mz : {0, -g.nz() / 2}) {
    for (int mx = -g.nx() / 2; mx < g.nx() / 2; ++mx) {
      for (int my = -g.ny() / 2; my < g.ny() / 2; ++my) {
        // Partner of a Nyquist index is itself.
        const int px = mx == -g.nx() / 2 ? mx : -mx;
        const int py = my == -g.ny() / 2 ? my : -my;
        defect = std::max(defect, std::abs(spectrum.mode(mx, my, mz) -
                                           std::conj(spectrum.mode(px, py, mz))));
      }
    }
  }
  return defect;
}

SpectrumField derivative(const SpectrumField& f, Axis axis) {
  SpectrumField out = f;
  SpectralContext::get(f.grid())->differentiate(out.data(), axis);
  return out;
}

ScalarField derivative(const ScalarField& f, Axis axis) {
  return dft_inverse(derivative(dft_forward(f), axis));
}

TensorField gradient(const VectorField& v) {
  const Grid& g = v.grid();
  const auto ctx = SpectralContext::get(g);
  TensorField out{VectorField(g), VectorField(g), VectorField(g)};
  ComplexVector base(ctx->spectral_size()), work(ctx->spectral_size());
  for (int c = 0; c < 3; ++c) {
    ctx->forward(v[c].data(), base.data());
    for (int j = 0; j < 3; ++j) {
      work = base;
      ctx->differentiate(work.data(), static_cast<Axis>(j));
      ctx->inverse_destructive(work.data(), out[j][c].data());
    }
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const auto ctx = SpectralContext::get(v.grid());
  const std::size_t n = ctx->spectral_size();
  ComplexVector cx(n), cy(n), cz(n), div(n);
  ctx->forward(v[0].data(), cx.data());
  ctx->forward(v[1].data(), cy.data());
  ctx->forward(v[2].data(), cz.data());
  ctx->divergence(cx.data(), cy.data(), cz.data(), div.data());
  ScalarField out(v.grid());
  ctx->inverse_destructive(div.data(), out.data());
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const auto ctx = SpectralContext::get(f.grid());
  ComplexVector c(ctx->spectral_size());
  ctx->forward(f.data(), c.data());
  const auto& k2 = ctx->waves().k2;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= -k2[i];
  ctx->zero_nyquist(c.data());
  ScalarField out(f.grid());
  ctx->inverse_destructive(c.data(), out.data());
  return out;
}

VectorField laplacian(const VectorField& v) {
  return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

SpectrumField dealias_23(SpectrumField f) {
  SpectralContext::get(f.grid())->dealias(f.data());
  return f;
}

VectorField leray_project(const VectorField& v) {
  const auto ctx = SpectralContext::get(v.grid());
  const std::size_t n = ctx->spectral_size();
  std::array<ComplexVector, 3> c{ComplexVector(n), ComplexVector(n),
                                        ComplexVector(n)};
  for (int i = 0; i < 3; ++i) ctx->forward(v[i].data(), c[i].data());
  ctx->project(c[0].data(), c[1].data(), c[2].data());
  VectorField out(v.grid());
  for (int i = 0; i < 3; ++i) ctx->inverse_destructive(c[i].data(), out[i].data());
  return out;
}

double max_divergence(const VectorField& v) { return divergence(v).max_abs(); }

double solenoidal_defect(const VectorField& v) {
  const auto ctx = SpectralContext::get(v.grid());
  const std::size_t n = ctx->spectral_size();
  std::array<ComplexVector, 3> c{ComplexVector(n), ComplexVector(n),
                                        ComplexVector(n)};
  for (int i = 0; i < 3; ++i) ctx->forward(v[i].data(), c[i].data());
  ComplexVector div(n);
  ctx->divergence(c[0].data(), c[1].data(), c[2].data(), div.data());
  const double div_sq = ctx->parseval(div.data());
  const auto& k2 = ctx->waves().k2;
  double grad_sq = 0.0;
  ComplexVector scaled(n);
  for (int i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < n; ++j) scaled[j] = c[i][j] * std::sqrt(k2[j]);
    grad_sq += ctx->parseval(scaled.data());
  }
  if (grad_sq == 0.0) return 0.0;
  return std::sqrt(div_sq / grad_sq);
}

ScalarField pressure_solve(const VectorField& w_minus, const VectorField& w_plus, bool dealias) {
  require_same_grid(w_minus.grid(), w_plus.grid(), "pressure_solve");
  for (const VectorField* w : {&w_minus, &w_plus}) {
    const double defect = solenoidal_defect(*w);
    if (defect > kSolenoidalTolerance) {
      throw NotSolenoidal("pressure_solve: input divergence defect " + std::to_string(defect) +
                          " exceeds 1e-8");
    }
  }
  const Grid& g = w_plus.grid();
  const auto ctx = SpectralContext::get(g);
  const auto& waves = ctx->waves();
  const std::size_t n = ctx->spectral_size();
  ComplexVector p_hat(n, 0.0), m_hat(n);
  ScalarField product(g);
  const int nx = g.nx(), ny = g.ny(), nzc = ctx->nzc();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // M_ij = w-_j w+_i
      for (std::size_t q = 0; q < g.size(); ++q) product[q] = w_minus[j][q] * w_plus[i][q];
      ctx->forward(product.data(), m_hat.data());
      if (dealias) ctx->dealias(m_hat.data());
      std::size_t idx = 0;
      for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
          for (int kz = 0; kz < nzc; ++kz, ++idx) {
            const double k2 = waves.k2[idx];
            if (k2 == 0.0 || waves.nyquist[idx]) continue;
            const double k[3] = {waves.kx(ix), waves.ky(iy), waves.kz(kz)};
            p_hat[idx] -= k[i] * k[j] / k2 * m_hat[idx];
          }
        }
      }
    }
  }
  ScalarField p(g);
  ctx->inverse_destructive(p_hat.data(), p.data());
  return p;
}

ScalarField advective_divergence(const VectorField& w_minus, const VectorField& w_plus) {
  require_same_grid(w_minus.grid(), w_plus.grid(), "advective_divergence");
  const TensorField grad = gradient(w_plus);
  VectorField adv(w_plus.grid());
  for (int i = 0; i < 3; ++i) {
    for (std::size_t q = 0; q < adv[i].size(); ++q) {
      adv[i][q] = w_minus[0][q] * grad[0][i][q] + w_minus[1][q] * grad[1][i][q] +
                  w_minus[2][q] * grad[2][i][q];
    }
  }
  return divergence(adv);
}

}  // namespace mhdreg
