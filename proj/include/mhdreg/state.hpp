#ifndef MHDREG_STATE_HPP_
#define MHDREG_STATE_HPP_

#include "mhdreg/field.hpp"

namespace mhdreg {

/// Velocity u and magnetic field b at time t.
struct State {
  VectorField u;
  VectorField b;
  double t = 0.0;

  [[nodiscard]] const Grid& grid() const noexcept { return u.grid(); }
};

/// Elsasser pair w+ = u + b, w- = u - b.
struct ElsasserState {
  VectorField w_plus;
  VectorField w_minus;
  double t = 0.0;
};

ElsasserState to_elsasser(const State& s);
State from_elsasser(const ElsasserState& e);

/// ||u||_2^2 and ||b||_2^2.
double kinetic_energy(const State& s);
double magnetic_energy(const State& s);

}  // namespace mhdreg

#endif  // MHDREG_STATE_HPP_
