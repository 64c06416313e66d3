#include "mhdreg/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mhdreg/errors.hpp"

namespace mhdreg {

Grid::Grid(std::array<int, 3> n, double length) : n_(n), length_(length), size_(1) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("box length must be positive and finite");
  }
  for (int i = 0; i < 3; ++i) {
    if (n[i] < 4 || n[i] % 2 != 0) {
      throw UnsupportedGrid("grid size " + std::to_string(n[i]) +
                            " on axis " + std::to_string(i) +
                            " must be even and >= 4");
    }
    const auto ni = static_cast<std::size_t>(n[i]);
    if (size_ > std::numeric_limits<std::size_t>::max() / ni) {
      throw UnsupportedGrid("grid point count overflows size_t");
    }
    size_ *= ni;
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw GridMismatch(std::string(context) + ": fields live on different grids");
  }
}

}  // namespace mhdreg
