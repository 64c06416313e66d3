#ifndef MHDREG_INEQUALITY_HPP_
#define MHDREG_INEQUALITY_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "mhdreg/field.hpp"

namespace mhdreg {

/// Exponents of the anisotropic interpolation inequality
///   ||phi||_gamma <= C ||phi_x||_lambda^{1/3} ||phi_y||_lambda^{1/3} ||phi_z||_mu^{1/3}.
struct AnisoParams {
  double mu = 2.0;
  double lambda = 2.0;
  double gamma = 6.0;

  /// Validates and fills gamma. Throws InvalidExponent.
  static AnisoParams make(double mu, double lambda);
};

/// gamma = 3 lambda / (2 - lambda (1 - 1/mu)). Requires 1 <= mu, lambda < inf
/// and 1 < 1/mu + 2/lambda <= 4; throws InvalidExponent naming the violated
/// constraint.
double gamma_of(double mu, double lambda);

enum class TestFamily { periodized_gaussian, anisotropic_gaussian, random_bump_sum };

TestFamily parse_test_family(std::string_view name);
std::string_view to_string(TestFamily family);

/// One separable Gaussian, amplitude * prod_a exp(-(x_a - c_a)^2 / (2 sigma_a^2)),
/// periodized over neighbouring boxes.
struct Bump {
  std::array<double, 3> center{};
  std::array<double, 3> sigma{};
  double amplitude = 1.0;
};

struct TestFunctionSpec {
  TestFamily family = TestFamily::periodized_gaussian;
  std::vector<Bump> bumps;
  std::uint64_t seed = 0;
};

/// A single Gaussian at the box centre.
TestFunctionSpec gaussian_spec(double length, std::array<double, 3> sigma, double amplitude = 1.0);
TestFunctionSpec gaussian_spec(double length, double sigma, double amplitude = 1.0);

/// Draws a random member of `family` for a box of side `length`:
///   periodized_gaussian:  sigma log-uniform in [L/40, L/24]
///   anisotropic_gaussian: largest sigma in [L/40, L/24], sigma_z / sigma_x
///                         and sigma_y / sigma_x log-uniform in [1/8, 8]
///   random_bump_sum:      2-4 bumps within L/32 of the centre, widths in
///                         [L/56, L/40], amplitudes of either sign
TestFunctionSpec random_spec(TestFamily family, double length, std::uint64_t seed);

ScalarField make_test_function(const TestFunctionSpec& spec, const Grid& grid);

/// phi(c + s (x - c)) about the box centre c.
TestFunctionSpec dilate(const TestFunctionSpec& spec, double length, double s);

/// Centre of |phi|^2 by circular mean along each axis.
std::array<double, 3> mass_center(const ScalarField& phi);
/// Fraction of int |phi|^2 lying at periodic distance > L/4 from mass_center.
double outer_mass_fraction(const ScalarField& phi);

inline constexpr double kLocalizationTolerance = 1e-10;

/// Throws DegenerateInput for a zero or non-finite field and NonLocalized when
/// outer_mass_fraction exceeds kLocalizationTolerance.
void require_localized(const ScalarField& phi);

/// ||phi||_gamma / (||phi_x||_lambda^{1/3} ||phi_y||_lambda^{1/3} ||phi_z||_mu^{1/3}).
/// Derivatives are spectral. A derivative with L2 norm below 1e-10 of
/// ||phi||_2 * 2 pi / L raises NonLocalized.
double check_A1(const ScalarField& phi, const AnisoParams& params);
/// The lambda = 2 case: ||phi||_{3 mu} against the same product.
double check_A2(const ScalarField& phi, double mu);
/// ||phi||_q / (||phi||_2^{(6-q)/(2q)} prod_a ||d_a phi||_2^{(q-2)/(2q)}), 2 <= q <= 6.
double check_A6(const ScalarField& phi, double q);

enum class Inequality { A1, A2, A6 };

Inequality parse_inequality(std::string_view name);
std::string_view to_string(Inequality which);

struct InequalityCase {
  Inequality which = Inequality::A1;
  double mu = 2.0;
  double lambda = 2.0;  // A1 only
  double q = 6.0;       // A6 only

  /// Throws InvalidExponent for parameters outside the inequality's range.
  void validate() const;
  [[nodiscard]] double ratio(const ScalarField& phi) const;
};

/// (ratio(phi), ratio(phi(s .))) for the function described by `spec`.
/// Throws InvalidExponent unless s is a positive integer.
std::pair<double, double> dilation_invariance(const TestFunctionSpec& spec, const Grid& grid,
                                              const InequalityCase& which, double s);

struct EmpiricalConstant {
  double sup_ratio = 0.0;  // a lower bound on the sharp constant
  std::size_t argmax = 0;  // trial index of the maximizer
  TestFunctionSpec argmax_spec;
  std::vector<double> ratios;  // NaN for skipped trials
  std::size_t skipped = 0;     // degenerate or non-localized trials
};

/// Trial i draws random_spec(family, L, seed_i) with seed_i derived from
/// (seed, i), so a longer sweep extends a shorter one. Ties go to the lower
/// index. Throws DegenerateInput if every trial is skipped.
EmpiricalConstant empirical_constant(TestFamily family, const InequalityCase& which, const Grid& grid,
                                     std::size_t trials, std::uint64_t seed);

}  // namespace mhdreg

#endif  // MHDREG_INEQUALITY_HPP_
