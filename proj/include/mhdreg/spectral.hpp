#ifndef MHDREG_SPECTRAL_HPP_
#define MHDREG_SPECTRAL_HPP_

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mhdreg/aligned.hpp"
#include "mhdreg/field.hpp"
#include "mhdreg/grid.hpp"

namespace mhdreg {

using Complex = std::complex<double>;
using ComplexVector = AlignedVector<Complex>;

/// Wavenumbers of the half-spectrum layout used by SpectrumField.
///
/// Coefficient (ix, iy, kz) lives at (ix * ny + iy) * (nz / 2 + 1) + kz.
/// Mode numbers along x and y run over {0, 1, ..., n/2 - 1, -n/2, ..., -1};
/// along z only 0..nz/2 is stored, the rest follow from Hermitian symmetry.
struct WaveGrid {
  std::vector<int> mode_x, mode_y, mode_z;
  double unit = 1.0;                       // 2 pi / L
  std::vector<double> k2;                  // |k|^2 (physical) per coefficient
  std::vector<std::uint8_t> nyquist;       // any axis at its Nyquist index
  std::vector<std::uint8_t> dealias_keep;  // all 3 |m_i| < n_i

  [[nodiscard]] double kx(int ix) const noexcept { return unit * mode_x[ix]; }
  [[nodiscard]] double ky(int iy) const noexcept { return unit * mode_y[iy]; }
  [[nodiscard]] double kz(int kz) const noexcept { return unit * mode_z[kz]; }
};

/// FFT plans and wavenumber tables for one grid. Immutable once built and
/// safe to share between threads.
class SpectralContext {
 public:
  explicit SpectralContext(const Grid& grid);
  ~SpectralContext();
  SpectralContext(const SpectralContext&) = delete;
  SpectralContext& operator=(const SpectralContext&) = delete;

  /// Cached context for `grid`.
  static std::shared_ptr<const SpectralContext> get(const Grid& grid);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const WaveGrid& waves() const noexcept { return waves_; }
  [[nodiscard]] int nzc() const noexcept { return grid_.nz() / 2 + 1; }
  [[nodiscard]] std::size_t spectral_size() const noexcept { return spectral_size_; }

  /// Forward transform with the 1/Npts factor, so coefficients are mode
  /// amplitudes: f(x) = sum_k c_k exp(i k.x).
  void forward(const double* in, Complex* out) const;
  /// Inverse transform. Overwrites `in`.
  void inverse_destructive(Complex* in, double* out) const;

  /// Multiplies by i k_axis and zeroes every Nyquist plane.
  void differentiate(Complex* c, Axis axis) const;
  /// Zeroes every coefficient with 3 |m_i| >= n_i on some axis.
  void dealias(Complex* c) const;
  void zero_nyquist(Complex* c) const;
  /// Leray projection in place: c <- c - k (k.c) / |k|^2 for k != 0,
  /// Nyquist modes zeroed, the mean left untouched.
  void project(Complex* cx, Complex* cy, Complex* cz) const;
  /// Spectral divergence coefficients of (cx, cy, cz).
  void divergence(const Complex* cx, const Complex* cy, const Complex* cz, Complex* out) const;
  /// vol * sum |c|^2 over the full (Hermitian) spectrum, i.e. ||f||_2^2.
  [[nodiscard]] double parseval(const Complex* c) const;

 private:
  Grid grid_;
  WaveGrid waves_;
  std::size_t spectral_size_;
  // Plans for 64-byte aligned arrays and fallbacks for anything else.
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
  void* forward_plan_unaligned_ = nullptr;
  void* inverse_plan_unaligned_ = nullptr;
};

/// Fourier coefficients of a real field in the half-spectrum layout.
class SpectrumField {
 public:
  explicit SpectrumField(const Grid& grid);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
  [[nodiscard]] std::span<Complex> coeffs() noexcept { return coeffs_; }
  [[nodiscard]] std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] Complex* data() noexcept { return coeffs_.data(); }
  [[nodiscard]] const Complex* data() const noexcept { return coeffs_.data(); }

  /// Coefficient of integer mode (mx, my, mz), each in [-n/2, n/2 - 1];
  /// negative mz is resolved through Hermitian symmetry.
  [[nodiscard]] Complex mode(int mx, int my, int mz) const;
  void set_mode(int mx, int my, int mz, Complex value);

 private:
  Grid grid_;
  ComplexVector coeffs_;
};

/// Any even grid with n_i >= 4 is supported (FFTW handles arbitrary sizes).
SpectrumField dft_forward(const ScalarField& f);
ScalarField dft_inverse(const SpectrumField& spectrum);

/// Largest |c(k) - conj(c(-k))| over the self-conjugate planes kz = 0 and
/// kz = nz/2.
double hermitian_defect(const SpectrumField& spectrum);

SpectrumField derivative(const SpectrumField& f, Axis axis);
ScalarField derivative(const ScalarField& f, Axis axis);
/// g[j][i] = d_j v_i.
TensorField gradient(const VectorField& v);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

SpectrumField dealias_23(SpectrumField f);

VectorField leray_project(const VectorField& v);

/// max |div v| over the grid, divergence computed spectrally.
double max_divergence(const VectorField& v);
/// ||div v||_2 / ||grad v||_2, or 0 when the gradient vanishes.
double solenoidal_defect(const VectorField& v);

/// Solves Lap p = -div(w_minus . grad w_plus) with zero mean. The quadratic
/// product is truncated by the two-thirds rule when `dealias` is set. Throws
/// NotSolenoidal if either input has solenoidal_defect above 1e-8.
ScalarField pressure_solve(const VectorField& w_minus, const VectorField& w_plus,
                           bool dealias = true);

/// div(w_minus . grad w_plus), computed spectrally (no truncation).
ScalarField advective_divergence(const VectorField& w_minus, const VectorField& w_plus);

}  // namespace mhdreg

#endif  // MHDREG_SPECTRAL_HPP_
