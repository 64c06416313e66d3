#include "mhdreg/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mhdreg/errors.hpp"
#include "mhdreg/spectral.hpp"

namespace mhdreg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kImages = 2;  // periodic images on each side

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double periodized_gaussian_1d(double x, double c, double sigma, double length) {
  double s = 0.0;
  for (int m = -kImages; m <= kImages; ++m) {
    const double d = (x - c + m * length) / sigma;
    s += std::exp(-0.5 * d * d);
  }
  return s;
}

std::array<ScalarField, 3> derivatives(const ScalarField& phi) {
  return {derivative(phi, Axis::x), derivative(phi, Axis::y), derivative(phi, Axis::z)};
}

void require_nonflat(const ScalarField& phi, const std::array<ScalarField, 3>& d) {
  const double scale = lp_norm(phi, 2.0) * phi.grid().wavenumber_unit();
  static constexpr const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    if (lp_norm(d[a], 2.0) <= 1e-10 * scale) {
      throw NonLocalized(std::string("derivative along ") + names[a] +
                         " vanishes: the field is constant in that direction");
    }
  }
}

}  // namespace

double gamma_of(double mu, double lambda) {
  if (!(mu >= 1.0) || !std::isfinite(mu)) throw InvalidExponent("constraint 1 <= mu < inf violated");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    throw InvalidExponent("constraint 1 <= lambda < inf violated");
  }
  const double s = 1.0 / mu + 2.0 / lambda;
  if (!(s > 1.0)) throw InvalidExponent("constraint 1 < 1/mu + 2/lambda violated");
  if (!(s <= 4.0)) throw InvalidExponent("constraint 1/mu + 2/lambda <= 4 violated");
  return 3.0 * lambda / (2.0 - lambda * (1.0 - 1.0 / mu));
}

AnisoParams AnisoParams::make(double mu, double lambda) { return {mu, lambda, gamma_of(mu, lambda)}; }

TestFamily parse_test_family(std::string_view name) {
  if (name == "periodized_gaussian") return TestFamily::periodized_gaussian;
  if (name == "anisotropic_gaussian") return TestFamily::anisotropic_gaussian;
  if (name == "random_bump_sum") return TestFamily::random_bump_sum;
  throw InvalidConfig("unknown test-function family '" + std::string(name) + "'");
}

std::string_view to_string(TestFamily family) {
  switch (family) {
    case TestFamily::periodized_gaussian: return "periodized_gaussian";
    case TestFamily::anisotropic_gaussian: return "anisotropic_gaussian";
    case TestFamily::random_bump_sum: return "random_bump_sum";
  }
  return "unknown";
}

TestFunctionSpec gaussian_spec(double length, std::array<double, 3> sigma, double amplitude) {
  const bool iso = sigma[0] == sigma[1] && sigma[1] == sigma[2];
  TestFunctionSpec spec;
  spec.family = iso ? TestFamily::periodized_gaussian : TestFamily::anisotropic_gaussian;
  const double c = 0.5 * length;
  spec.bumps.push_back(Bump{{c, c, c}, sigma, amplitude});
  return spec;
}

TestFunctionSpec gaussian_spec(double length, double sigma, double amplitude) {
  return gaussian_spec(length, {sigma, sigma, sigma}, amplitude);
}

TestFunctionSpec random_spec(TestFamily family, double length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double lo = length / 40.0, hi = length / 24.0;
  TestFunctionSpec spec;
  switch (family) {
    case TestFamily::periodized_gaussian:
      spec = gaussian_spec(length, log_uniform(rng, lo, hi));
      break;
    case TestFamily::anisotropic_gaussian: {
      std::array<double, 3> sigma{1.0, log_uniform(rng, 0.125, 8.0), log_uniform(rng, 0.125, 8.0)};
      const double largest = *std::max_element(sigma.begin(), sigma.end());
      const double target = log_uniform(rng, lo, hi);
      for (double& s : sigma) s *= target / largest;
      spec = gaussian_spec(length, sigma);
      spec.family = TestFamily::anisotropic_gaussian;
      break;
    }
    case TestFamily::random_bump_sum: {
      std::uniform_int_distribution<int> count(2, 4);
      std::uniform_real_distribution<double> offset(-1.0, 1.0);
      std::uniform_real_distribution<double> amp(0.5, 1.0);
      std::bernoulli_distribution negative(0.5);
      spec.family = TestFamily::random_bump_sum;
      const int k = count(rng);
      for (int i = 0; i < k; ++i) {
        Bump b;
        // Offset inside a ball of radius L/32.
        std::array<double, 3> v{};
        double r2;
        do {
          for (double& x : v) x = offset(rng);
          r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        } while (r2 > 1.0);
        for (int a = 0; a < 3; ++a) {
          b.center[a] = 0.5 * length + v[a] * length / 32.0;
          b.sigma[a] = log_uniform(rng, length / 56.0, length / 40.0);
        }
        b.amplitude = amp(rng) * (negative(rng) ? -1.0 : 1.0);
        spec.bumps.push_back(b);
      }
      break;
    }
  }
  spec.seed = seed;
  return spec;
}

ScalarField make_test_function(const TestFunctionSpec& spec, const Grid& grid) {
  ScalarField phi(grid);
  const double length = grid.length();
  std::array<std::vector<double>, 3> profile;
  for (const Bump& b : spec.bumps) {
    for (int a = 0; a < 3; ++a) {
      const Axis axis = static_cast<Axis>(a);
      profile[a].resize(grid.n(axis));
      for (int i = 0; i < grid.n(axis); ++i) {
        profile[a][i] = periodized_gaussian_1d(grid.coordinate(axis, i), b.center[a], b.sigma[a], length);
      }
    }
    for (int ix = 0; ix < grid.nx(); ++ix) {
      for (int iy = 0; iy < grid.ny(); ++iy) {
        const double pxy = b.amplitude * profile[0][ix] * profile[1][iy];
        for (int iz = 0; iz < grid.nz(); ++iz) phi.at(ix, iy, iz) += pxy * profile[2][iz];
      }
    }
  }
  return phi;
}

TestFunctionSpec dilate(const TestFunctionSpec& spec, double length, double s) {
  TestFunctionSpec out = spec;
  const double c = 0.5 * length;
  for (Bump& b : out.bumps) {
    for (int a = 0; a < 3; ++a) {
      b.center[a] = c + (b.center[a] - c) / s;
      b.sigma[a] /= s;
    }
  }
  return out;
}

std::array<double, 3> mass_center(const ScalarField& phi) {
  const Grid& g = phi.grid();
  std::array<double, 3> center{};
  for (int a = 0; a < 3; ++a) {
    const Axis axis = static_cast<Axis>(a);
    const int n = g.n(axis);
    std::vector<double> marginal(n, 0.0);
    for (int ix = 0; ix < g.nx(); ++ix) {
      for (int iy = 0; iy < g.ny(); ++iy) {
        for (int iz = 0; iz < g.nz(); ++iz) {
          const double v = phi.at(ix, iy, iz);
          marginal[a == 0 ? ix : a == 1 ? iy : iz] += v * v;
        }
      }
    }
    double s = 0.0, c = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = kTwoPi * i / n;
      s += marginal[i] * std::sin(theta);
      c += marginal[i] * std::cos(theta);
    }
    double angle = std::atan2(s, c);
    if (angle < 0.0) angle += kTwoPi;
    center[a] = angle / kTwoPi * g.length();
  }
  return center;
}

double outer_mass_fraction(const ScalarField& phi) {
  const Grid& g = phi.grid();
  const auto center = mass_center(phi);
  const double length = g.length();
  const double radius2 = 0.0625 * length * length;
  const auto wrap = [length](double d) {
    d = std::fmod(std::abs(d), length);
    return std::min(d, length - d);
  };
  const double total = detail::pairwise_sum(0, g.size(), [&](std::size_t i) { return phi[i] * phi[i]; });
  if (!(total > 0.0)) return kNaN;
  double outer = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix) {
    const double dx = wrap(g.coordinate(Axis::x, ix) - center[0]);
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double dy = wrap(g.coordinate(Axis::y, iy) - center[1]);
      for (int iz = 0; iz < g.nz(); ++iz) {
        const double dz = wrap(g.coordinate(Axis::z, iz) - center[2]);
        if (dx * dx + dy * dy + dz * dz > radius2) {
          const double v = phi.at(ix, iy, iz);
          outer += v * v;
        }
      }
    }
  }
  return outer / total;
}

void require_localized(const ScalarField& phi) {
  if (!phi.all_finite()) throw DegenerateInput("test function has non-finite values");
  if (phi.max_abs() == 0.0) throw DegenerateInput("test function is identically zero");
  const double fraction = outer_mass_fraction(phi);
  if (!(fraction <= kLocalizationTolerance)) {
    std::ostringstream msg;
    msg << "test function carries a fraction " << fraction
        << " of its mass beyond L/4 from its centre (limit " << kLocalizationTolerance << ")";
    throw NonLocalized(msg.str());
  }
}

double check_A1(const ScalarField& phi, const AnisoParams& params) {
  const double gamma = gamma_of(params.mu, params.lambda);
  require_localized(phi);
  const auto d = derivatives(phi);
  require_nonflat(phi, d);
  const double rhs = std::cbrt(lp_norm(d[0], params.lambda)) * std::cbrt(lp_norm(d[1], params.lambda)) *
                     std::cbrt(lp_norm(d[2], params.mu));
  return lp_norm(phi, gamma) / rhs;
}

double check_A2(const ScalarField& phi, double mu) { return check_A1(phi, AnisoParams::make(mu, 2.0)); }

double check_A6(const ScalarField& phi, double q) {
  if (!(q >= 2.0 && q <= 6.0)) throw InvalidExponent("A6 requires 2 <= q <= 6");
  require_localized(phi);
  const auto d = derivatives(phi);
  require_nonflat(phi, d);
  const double e0 = (6.0 - q) / (2.0 * q);
  const double e1 = (q - 2.0) / (2.0 * q);
  const double rhs = std::pow(lp_norm(phi, 2.0), e0) * std::pow(lp_norm(d[0], 2.0), e1) *
                     std::pow(lp_norm(d[1], 2.0), e1) * std::pow(lp_norm(d[2], 2.0), e1);
  return lp_norm(phi, q) / rhs;
}

Inequality parse_inequality(std::string_view name) {
  if (name == "A1") return Inequality::A1;
  if (name == "A2") return Inequality::A2;
  if (name == "A6") return Inequality::A6;
  throw InvalidConfig("unknown inequality '" + std::string(name) + "'");
}

std::string_view to_string(Inequality which) {
  switch (which) {
    case Inequality::A1: return "A1";
    case Inequality::A2: return "A2";
    case Inequality::A6: return "A6";
  }
  return "unknown";
}

void InequalityCase::validate() const {
  switch (which) {
    case Inequality::A1: gamma_of(mu, lambda); break;
    case Inequality::A2: gamma_of(mu, 2.0); break;
    case Inequality::A6:
      if (!(q >= 2.0 && q <= 6.0)) throw InvalidExponent("A6 requires 2 <= q <= 6");
      break;
  }
}

double InequalityCase::ratio(const ScalarField& phi) const {
  switch (which) {
    case Inequality::A1: return check_A1(phi, AnisoParams::make(mu, lambda));
    case Inequality::A2: return check_A2(phi, mu);
    case Inequality::A6: return check_A6(phi, q);
  }
  return kNaN;
}

std::pair<double, double> dilation_invariance(const TestFunctionSpec& spec, const Grid& grid,
                                              const InequalityCase& which, double s) {
  if (!(s >= 1.0) || s != std::floor(s) || !std::isfinite(s)) {
    throw InvalidExponent("dilation factor must be a positive integer");
  }
  which.validate();
  const double base = which.ratio(make_test_function(spec, grid));
  const double dilated = which.ratio(make_test_function(dilate(spec, grid.length(), s), grid));
  return {base, dilated};
}

EmpiricalConstant empirical_constant(TestFamily family, const InequalityCase& which, const Grid& grid,
                                     std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidConfig("empirical_constant needs at least one trial");
  which.validate();
  EmpiricalConstant out;
  out.ratios.assign(trials, kNaN);
  bool found = false;
  for (std::size_t i = 0; i < trials; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 trial_rng(seq);
    const TestFunctionSpec spec = random_spec(family, grid.length(), trial_rng());
    double r = kNaN;
    try {
      r = which.ratio(make_test_function(spec, grid));
    } catch (const DegenerateInput&) {
    } catch (const NonLocalized&) {
    }
    if (!std::isfinite(r)) {
      ++out.skipped;
      continue;
    }
    out.ratios[i] = r;
    if (!found || r > out.sup_ratio) {
      out.sup_ratio = r;
      out.argmax = i;
      out.argmax_spec = spec;
      found = true;
    }
  }
  if (!found) throw DegenerateInput("every trial was degenerate or non-localized");
  return out;
}

}  // namespace mhdreg
