#include "mhdreg/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhdreg/errors.hpp"

namespace mhdreg {

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(values.begin(), values.end()) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("value count " + std::to_string(values_.size()) +
                       " does not match grid size " + std::to_string(grid_.size()));
  }
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(double, double, double)>& f) {
  ScalarField out(grid);
  for (int ix = 0; ix < grid.nx(); ++ix) {
    const double x = grid.coordinate(Axis::x, ix);
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const double y = grid.coordinate(Axis::y, iy);
      for (int iz = 0; iz < grid.nz(); ++iz) {
        out.at(ix, iy, iz) = f(x, y, grid.coordinate(Axis::z, iz));
      }
    }
  }
  return out;
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : comps_{std::move(x), std::move(y), std::move(z)} {
  require_same_grid(comps_[0].grid(), comps_[1].grid(), "VectorField");
  require_same_grid(comps_[0].grid(), comps_[2].grid(), "VectorField");
}

VectorField VectorField::sample(
    const Grid& grid, const std::function<std::array<double, 3>(double, double, double)>& f) {
  VectorField out(grid);
  for (int ix = 0; ix < grid.nx(); ++ix) {
    const double x = grid.coordinate(Axis::x, ix);
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const double y = grid.coordinate(Axis::y, iy);
      for (int iz = 0; iz < grid.nz(); ++iz) {
        const auto v = f(x, y, grid.coordinate(Axis::z, iz));
        const std::size_t idx = grid.index(ix, iy, iz);
        for (int c = 0; c < 3; ++c) out.comps_[c][idx] = v[c];
      }
    }
  }
  return out;
}

bool VectorField::all_finite() const noexcept {
  return comps_[0].all_finite() && comps_[1].all_finite() && comps_[2].all_finite();
}

double VectorField::max_abs() const noexcept {
  return std::max({comps_[0].max_abs(), comps_[1].max_abs(), comps_[2].max_abs()});
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int c = 0; c < 3; ++c) comps_[c] += other.comps_[c];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (int c = 0; c < 3; ++c) comps_[c] -= other.comps_[c];
  return *this;
}

VectorField& VectorField::operator*=(double c) noexcept {
  for (auto& comp : comps_) comp *= c;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

ScalarField squared_magnitude(const VectorField& v) {
  ScalarField out(v.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i];
  }
  return out;
}

ScalarField magnitude(const VectorField& v) {
  ScalarField out = squared_magnitude(v);
  for (double& s : out.values()) s = std::sqrt(s);
  return out;
}

ScalarField magnitude(const TensorField& g) {
  ScalarField out(g[0].grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int c = 0; c < 3; ++c) s += g[j][c][i] * g[j][c][i];
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidExponent("L^p exponent must satisfy p >= 1, got " + std::to_string(p));
  }
  if (!f.all_finite()) {
    throw DegenerateInput("L^p norm of a field with non-finite samples");
  }
  const double m = f.max_abs();
  if (m == 0.0 || std::isinf(p)) return m;
  const auto v = f.values();
  // Scaling by the max keeps |f|^p representable for large p.
  double s;
  if (p == 2.0) {
    s = detail::pairwise_sum(0, v.size(), [&](std::size_t i) {
      const double a = v[i] / m;
      return a * a;
    });
  } else if (p == 1.0) {
    s = detail::pairwise_sum(0, v.size(), [&](std::size_t i) { return std::abs(v[i]) / m; });
  } else {
    s = detail::pairwise_sum(0, v.size(),
                             [&](std::size_t i) { return std::pow(std::abs(v[i]) / m, p); });
  }
  return m * std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double vector_lp_norm(const VectorField& v, double p) { return lp_norm(magnitude(v), p); }

double tensor_lp_norm(const TensorField& g, double p) { return lp_norm(magnitude(g), p); }

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const double s = detail::pairwise_sum(0, f.size(), [&](std::size_t i) { return f[i] * g[i]; });
  return s * f.grid().cell_volume();
}

double inner_product(const VectorField& f, const VectorField& g) {
  return inner_product(f[0], g[0]) + inner_product(f[1], g[1]) + inner_product(f[2], g[2]);
}

double inner_product(const TensorField& f, const TensorField& g) {
  return inner_product(f[0], g[0]) + inner_product(f[1], g[1]) + inner_product(f[2], g[2]);
}

double integrate_product(const ScalarField& a, const ScalarField& b, const ScalarField& c) {
  require_same_grid(a.grid(), b.grid(), "integrate_product");
  require_same_grid(a.grid(), c.grid(), "integrate_product");
  const double s =
      detail::pairwise_sum(0, a.size(), [&](std::size_t i) { return a[i] * b[i] * c[i]; });
  return s * a.grid().cell_volume();
}

double integrate(const ScalarField& f) {
  const double s = detail::pairwise_sum(0, f.size(), [&](std::size_t i) { return f[i]; });
  return s * f.grid().cell_volume();
}

}  // namespace mhdreg
