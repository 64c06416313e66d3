#ifndef MHDREG_FIELD_HPP_
#define MHDREG_FIELD_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mhdreg/aligned.hpp"
#include "mhdreg/grid.hpp"

namespace mhdreg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real samples of a scalar function on a Grid, z-fastest.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double value = 0.0)
      : grid_(grid), values_(grid.size(), value) {}
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f(x, y, z) at every grid point.
  static ScalarField sample(const Grid& grid,
                            const std::function<double(double, double, double)>& f);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  [[nodiscard]] double& operator[](std::size_t i) noexcept { return values_[i]; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
  [[nodiscard]] double& at(int ix, int iy, int iz) noexcept { return values_[grid_.index(ix, iy, iz)]; }
  [[nodiscard]] double at(int ix, int iy, int iz) const noexcept { return values_[grid_.index(ix, iy, iz)]; }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double* data() noexcept { return values_.data(); }
  [[nodiscard]] const double* data() const noexcept { return values_.data(); }

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] double max_abs() const noexcept;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double c) noexcept;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  AlignedVector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Three scalar components on one grid.
class VectorField {
 public:
  explicit VectorField(const Grid& grid) : comps_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  static VectorField sample(const Grid& grid,
                            const std::function<std::array<double, 3>(double, double, double)>& f);

  [[nodiscard]] const Grid& grid() const noexcept { return comps_[0].grid(); }
  [[nodiscard]] ScalarField& operator[](int c) noexcept { return comps_[c]; }
  [[nodiscard]] const ScalarField& operator[](int c) const noexcept { return comps_[c]; }

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] double max_abs() const noexcept;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double c) noexcept;

  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  std::array<ScalarField, 3> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

/// Gradient of a vector field: `g[j][i]` holds d_j v_i.
using TensorField = std::array<VectorField, 3>;

/// Pointwise Euclidean magnitude |v(x)|.
ScalarField magnitude(const VectorField& v);
/// Pointwise Frobenius magnitude |g(x)|_F.
ScalarField magnitude(const TensorField& g);
/// Pointwise |v(x)|^2.
ScalarField squared_magnitude(const VectorField& v);

/// Riemann-sum L^p norm: (sum |f|^p * vol / Npts)^(1/p); p = kInf gives max |f|.
/// Throws InvalidExponent for p < 1 (or NaN) and DegenerateInput for
/// non-finite samples.
double lp_norm(const ScalarField& f, double p);
/// lp_norm of the pointwise Euclidean magnitude.
double vector_lp_norm(const VectorField& v, double p);
/// lp_norm of the pointwise Frobenius magnitude.
double tensor_lp_norm(const TensorField& g, double p);

/// sum f g * vol / Npts. Throws GridMismatch.
double inner_product(const ScalarField& f, const ScalarField& g);
double inner_product(const VectorField& f, const VectorField& g);
double inner_product(const TensorField& f, const TensorField& g);

/// Integral of a product of three scalar fields.
double integrate_product(const ScalarField& a, const ScalarField& b, const ScalarField& c);
/// Integral of a scalar field.
double integrate(const ScalarField& f);

namespace detail {

/// Pairwise summation of term(i) for i in [0, n); fixed reduction order.
template <typename Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
  constexpr std::size_t kBlock = 256;
  if (end - begin <= kBlock) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

}  // namespace detail

}  // namespace mhdreg

#endif  // MHDREG_FIELD_HPP_
