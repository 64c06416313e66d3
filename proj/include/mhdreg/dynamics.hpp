#ifndef MHDREG_DYNAMICS_HPP_
#define MHDREG_DYNAMICS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mhdreg/spectral.hpp"
#include "mhdreg/state.hpp"

namespace mhdreg {

/// Which variables the integrator advances. Both describe the same system;
/// the Elsasser form requires nu == eta.
enum class Form { primitive, elsasser };

Form parse_form(std::string_view name);
std::string_view to_string(Form form);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  double nu = 1.0;
  double eta = 1.0;
  bool dealias = true;
  Form form = Form::primitive;

  /// Throws InvalidConfig.
  void validate() const;
};

struct Tendency {
  VectorField du;
  VectorField db;
};

/// du/dt = P[-u.grad u + b.grad b] + nu Lap u and
/// db/dt = P[-u.grad b + b.grad u] + eta Lap b, with the quadratic products
/// dealiased when cfg.dealias is set. Throws NotSolenoidal if the state's
/// solenoidal defect exceeds 1e-8.
Tendency tendency(const State& s, const SolverConfig& cfg);

/// Integrating-factor RK4 (Lawson) on the spectral coefficients. Diffusion is
/// integrated exactly by exp(-nu |k|^2 h) factors; the state is Leray
/// projected on load and after every step.
class Integrator {
 public:
  Integrator(const Grid& grid, const SolverConfig& cfg);

  void set_state(const State& s);
  [[nodiscard]] State state() const;
  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] const Grid& grid() const noexcept { return ctx_->grid(); }

  /// Advances by h and sets the clock to `t_new` (t + h unless given).
  /// Throws BlowupDetected if any coefficient becomes non-finite.
  void advance(double h, double t_new);
  void advance(double h) { advance(h, t_ + h); }

  /// Spectral tendency of the stored variables, nonlinear part only.
  using Coeffs = std::array<ComplexVector, 6>;
  void nonlinear(const Coeffs& a, Coeffs& out);

  [[nodiscard]] const Coeffs& coefficients() const noexcept { return a_; }

 private:
  void nonlinear_primitive(const Coeffs& a, Coeffs& out);
  void nonlinear_elsasser(const Coeffs& a, Coeffs& out);
  void to_physical(const Coeffs& a);
  void accumulate_product(int target, int axis, double sign, Coeffs& out);
  void update_factors(double h);
  [[nodiscard]] double rate(int field) const noexcept;

  std::shared_ptr<const SpectralContext> ctx_;
  SolverConfig cfg_;
  double t_ = 0.0;
  std::size_t steps_ = 0;
  Coeffs a_, k1_, k2_, k3_, k4_, tmp_;
  std::array<AlignedVector<double>, 6> phys_;
  AlignedVector<double> product_;
  ComplexVector product_hat_, scratch_;
  double factor_h_ = -1.0;
  // [0]/[1]: half/full step factors for rate nu, [2]/[3] for rate eta.
  std::array<std::vector<double>, 4> factors_;
};

/// One integrating-factor RK4 step of size cfg.dt.
State step(const State& s, const SolverConfig& cfg);

struct SimulationHooks {
  int sample_every = 1;      // steps between samples; the first and last step always sample
  int checkpoint_every = 0;  // 0 disables checkpoints
  bool keep_states = false;  // store sampled states in the trajectory
  std::function<void(const State&, std::size_t step)> on_sample;
  std::function<void(const State&, std::size_t step)> on_checkpoint;
  std::function<void(const std::string&)> on_warning;
};

struct Trajectory {
  std::vector<double> times;  // sample times
  std::vector<State> states;  // filled when keep_states
  std::size_t steps = 0;
  std::optional<State> final_state;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Steps from init.t to cfg.t_end. The last step is shortened to land on
/// t_end exactly. A CFL advisory is sent to on_warning (stderr by default)
/// when dt > 0.5 * spacing / max(|u| + |b|).
Trajectory simulate(const State& init, const SolverConfig& cfg, const SimulationHooks& hooks = {});

/// Number of steps simulate() takes for a span of `duration`.
std::size_t step_count(double duration, double dt);

enum class InitKind { taylor_green, orszag_tang_3d, random_bandlimited, shear_decay, checkpoint };

InitKind parse_init_kind(std::string_view name);
std::string_view to_string(InitKind kind);

struct InitParams {
  double amplitude = 1.0;
  double epsilon = 0.1;  // orszag_tang_3d z-perturbation
  double k_max = 2.0;    // random_bandlimited radius in integer mode numbers
  double energy = 1.0;   // random_bandlimited (||u||^2 + ||b||^2) / vol
  std::string checkpoint_path;
};

/// Builds divergence-free initial data. With k0 = 2 pi / L:
///   taylor_green:   u = A (cos k0x sin k0y, -sin k0x cos k0y, 0), b = 0
///   orszag_tang_3d: u = A[(-sin y, sin x, 0) + eps (sin z, 0, sin x)],
///                   b = A[(-sin y, sin 2x, 0) + eps (0, sin z, sin y)]
///   shear_decay:    u = A (sin z, 0, 0), b = A (0, sin z, 0)
///   random_bandlimited: Gaussian modes with 0 < |m| <= k_max, projected and
///                   scaled so ||u||^2 = ||b||^2 = energy * vol / 2
///   checkpoint:     read from params.checkpoint_path
State initial_data(InitKind kind, const InitParams& params, const Grid& grid, std::uint64_t seed);

}  // namespace mhdreg

#endif  // MHDREG_DYNAMICS_HPP_
