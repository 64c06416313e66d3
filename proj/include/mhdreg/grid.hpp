#ifndef MHDREG_GRID_HPP_
#define MHDREG_GRID_HPP_

#include <array>
#include <cstddef>
#include <numbers>

namespace mhdreg {

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Periodic cube [0, L)^3 sampled at n_x * n_y * n_z points.
///
/// Sample (ix, iy, iz) sits at (ix, iy, iz) * spacing and is stored at linear
/// index (ix * ny + iy) * nz + iz, so z varies fastest.
class Grid {
 public:
  /// Throws UnsupportedGrid unless every n_i is even and at least 4, and
  /// std::invalid_argument if length is not positive and finite.
  Grid(std::array<int, 3> n, double length = kTwoPi);
  explicit Grid(int n, double length = kTwoPi) : Grid({n, n, n}, length) {}

  [[nodiscard]] int n(Axis a) const noexcept { return n_[static_cast<int>(a)]; }
  [[nodiscard]] int nx() const noexcept { return n_[0]; }
  [[nodiscard]] int ny() const noexcept { return n_[1]; }
  [[nodiscard]] int nz() const noexcept { return n_[2]; }
  [[nodiscard]] const std::array<int, 3>& shape() const noexcept { return n_; }

  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] double spacing(Axis a) const noexcept { return length_ / n(a); }
  [[nodiscard]] double volume() const noexcept { return length_ * length_ * length_; }
  /// Quadrature weight of one sample, vol / Npts.
  [[nodiscard]] double cell_volume() const noexcept { return volume() / static_cast<double>(size_); }
  /// 2 pi / L: converts integer mode numbers to wavenumbers.
  [[nodiscard]] double wavenumber_unit() const noexcept { return kTwoPi / length_; }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t index(int ix, int iy, int iz) const noexcept {
    return (static_cast<std::size_t>(ix) * n_[1] + iy) * n_[2] + iz;
  }
  [[nodiscard]] double coordinate(Axis a, int i) const noexcept { return i * spacing(a); }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  std::array<int, 3> n_;
  double length_;
  std::size_t size_;
};

/// Throws GridMismatch when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace mhdreg

#endif  // MHDREG_GRID_HPP_
