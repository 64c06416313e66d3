#ifndef MHDREG_TESTS_ORACLE_HPP_
#define MHDREG_TESTS_ORACLE_HPP_

// Brute-force reference implementations used as test oracles. Nothing here
// calls FFTW or the library's spectral code: transforms are direct sums,
// one axis at a time, so keep grids small.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mhdreg/field.hpp"
#include "mhdreg/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;
using mhdreg::Grid;
using mhdreg::ScalarField;
using mhdreg::VectorField;

inline int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

// Full complex spectrum, c[(ix*ny+iy)*nz+iz] with f = sum c exp(i k.x).
struct Spectrum {
  Grid grid;
  std::vector<cplx> c;
};

inline Spectrum dft(const ScalarField& f) {
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  Spectrum out{g, std::vector<cplx>(g.size())};
  std::vector<cplx> a(f.values().begin(), f.values().end()), b(g.size());
  const auto pass = [&](int axis) {
    const int n = g.shape()[axis];
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        for (int iz = 0; iz < nz; ++iz) {
          int idx[3] = {ix, iy, iz};
          const int m = idx[axis];
          cplx s = 0.0;
          for (int j = 0; j < n; ++j) {
            idx[axis] = j;
            s += a[g.index(idx[0], idx[1], idx[2])] * std::polar(1.0, -2.0 * M_PI * m * j / n);
          }
          b[g.index(ix, iy, iz)] = s / static_cast<double>(n);
        }
      }
    }
    std::swap(a, b);
  };
  pass(0);
  pass(1);
  pass(2);
  out.c = a;
  return out;
}

inline ScalarField idft(const Spectrum& s) {
  const Grid& g = s.grid;
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  std::vector<cplx> a = s.c, b(g.size());
  const auto pass = [&](int axis) {
    const int n = g.shape()[axis];
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        for (int iz = 0; iz < nz; ++iz) {
          int idx[3] = {ix, iy, iz};
          const int j = idx[axis];
          cplx sum = 0.0;
          for (int m = 0; m < n; ++m) {
            idx[axis] = m;
            sum += a[g.index(idx[0], idx[1], idx[2])] * std::polar(1.0, 2.0 * M_PI * m * j / n);
          }
          b[g.index(ix, iy, iz)] = sum;
        }
      }
    }
    std::swap(a, b);
  };
  pass(0);
  pass(1);
  pass(2);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = a[i].real();
  return out;
}

inline std::array<int, 3> modes(const Grid& g, std::size_t i) {
  const int nz = g.nz(), ny = g.ny();
  const int iz = static_cast<int>(i % nz);
  const int iy = static_cast<int>((i / nz) % ny);
  const int ix = static_cast<int>(i / (static_cast<std::size_t>(nz) * ny));
  return {signed_mode(ix, g.nx()), signed_mode(iy, ny), signed_mode(iz, nz)};
}

inline bool nyquist(const Grid& g, const std::array<int, 3>& m) {
  return m[0] == -g.nx() / 2 || m[1] == -g.ny() / 2 || m[2] == -g.nz() / 2;
}

inline ScalarField derivative(const ScalarField& f, int axis) {
  Spectrum s = dft(f);
  const double unit = f.grid().wavenumber_unit();
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    const auto m = modes(s.grid, i);
    s.c[i] = nyquist(s.grid, m) ? cplx{} : cplx(0.0, unit * m[axis]) * s.c[i];
  }
  return idft(s);
}

inline VectorField project(const VectorField& v) {
  const Grid& g = v.grid();
  std::array<Spectrum, 3> s{dft(v[0]), dft(v[1]), dft(v[2])};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto m = modes(g, i);
    if (nyquist(g, m)) {
      for (auto& c : s) c.c[i] = 0.0;
      continue;
    }
    const double k2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    if (k2 == 0.0) continue;
    const cplx kc = double(m[0]) * s[0].c[i] + double(m[1]) * s[1].c[i] + double(m[2]) * s[2].c[i];
    for (int a = 0; a < 3; ++a) s[a].c[i] -= double(m[a]) * kc / k2;
  }
  return VectorField(idft(s[0]), idft(s[1]), idft(s[2]));
}

// (a . grad) c, component-wise, with derivatives from the direct DFT.
inline VectorField advect(const VectorField& a, const VectorField& c) {
  VectorField out(a.grid());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const ScalarField d = derivative(c[i], j);
      for (std::size_t q = 0; q < d.size(); ++q) out[i][q] += a[j][q] * d[q];
    }
  }
  return out;
}

inline VectorField laplacian(const VectorField& v) {
  VectorField out(v.grid());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i] += derivative(derivative(v[i], j), j);
  }
  return out;
}

// Random real field with integer modes |m_a| <= mmax on every axis.
inline ScalarField band_limited(const Grid& g, int mmax, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  ScalarField f(g);
  const double k0 = g.wavenumber_unit();
  for (int mx = -mmax; mx <= mmax; ++mx) {
    for (int my = -mmax; my <= mmax; ++my) {
      for (int mz = 0; mz <= mmax; ++mz) {
        const double a = amp(rng), ph = phase(rng);
        for (int ix = 0; ix < g.nx(); ++ix) {
          for (int iy = 0; iy < g.ny(); ++iy) {
            for (int iz = 0; iz < g.nz(); ++iz) {
              const double x = g.coordinate(mhdreg::Axis::x, ix);
              const double y = g.coordinate(mhdreg::Axis::y, iy);
              const double z = g.coordinate(mhdreg::Axis::z, iz);
              f.at(ix, iy, iz) += a * std::cos(k0 * (mx * x + my * y + mz * z) + ph);
            }
          }
        }
      }
    }
  }
  return f;
}

inline VectorField solenoidal(const Grid& g, int mmax, std::mt19937_64& rng) {
  VectorField v(band_limited(g, mmax, rng), band_limited(g, mmax, rng), band_limited(g, mmax, rng));
  return project(v);
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
  return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}

// Plain left-to-right quadrature sum, independent of the library's pairwise sum.
inline double quad(const ScalarField& f) {
  long double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
  return static_cast<double>(s) * f.grid().cell_volume();
}

}  // namespace oracle

#endif  // MHDREG_TESTS_ORACLE_HPP_
