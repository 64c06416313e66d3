#ifndef MHDREG_MONITORS_HPP_
#define MHDREG_MONITORS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "mhdreg/field.hpp"
#include "mhdreg/state.hpp"

namespace mhdreg {

enum class CriterionKind { velocity_z, pressure_z, gradient_velocity };

/// Accepts the long names and the short forms velocity, pressure, gradient.
CriterionKind parse_criterion_kind(std::string_view name);
std::string_view to_string(CriterionKind kind);

/// A space-time integrability condition: the L^beta(0, T) norm of the
/// L^alpha norm of u_z, p_z or grad u. beta may be infinite.
struct CriterionSpec {
  CriterionKind kind = CriterionKind::velocity_z;
  double alpha = 6.0;
  double beta = 4.0;

  /// "kind:alpha:beta", beta may be "inf". Throws InvalidExponent.
  static CriterionSpec parse(std::string_view text);
  /// Throws InvalidExponent unless alpha >= 1 and beta >= 1 (or infinite).
  void validate() const;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

std::string to_string(const CriterionSpec& spec);

struct Admissibility {
  bool admissible = false;
  double slack = 0.0;  // bound - (3/alpha + 2/beta); 0 on the boundary
};

/// velocity_z:        alpha >= 3 and 3/alpha + 2/beta <= 1
/// pressure_z:        alpha >= 12/7 and 3/alpha + 2/beta <= 7/4
/// gradient_velocity: 3/alpha + 2/beta = 2 and 1 < beta <= 2
/// Comparisons allow 1e-12.
Admissibility check_admissible(const CriterionSpec& spec);

/// Exponents of the Hoelder chains for a given alpha.
struct HolderExponents {
  double alpha = 0.0;
  double r = 0.0;         // 1/r + 1/(3 alpha) = 1/2
  double q = 0.0;         // 2 / (3 (1 - 1/alpha))
  double gamma = 0.0;     // 2 / (1 - 3/alpha), infinite at alpha = 3
  double lambda_p = 0.0;  // 1/alpha + 2/lambda = 7/4
  double growth = 0.0;    // (2 alpha - 6) / (2 alpha - 3)

  /// Throws InvalidExponent for alpha < 1.
  static HolderExponents from_alpha(double alpha);
};

/// Everything measured on one state. Norms are Euclidean for vectors and
/// Frobenius for gradients; integrals are grid quadratures.
struct SampleRecord {
  double t = 0.0;
  double kinetic_energy = 0.0;   // ||u||_2^2
  double magnetic_energy = 0.0;  // ||b||_2^2
  double grad_u_sq = 0.0;        // ||grad u||_2^2
  double grad_b_sq = 0.0;
  double uz_sq = 0.0;            // ||u_z||_2^2
  double bz_sq = 0.0;
  double grad_uz_sq = 0.0;       // ||grad u_z||_2^2
  double grad_bz_sq = 0.0;
  double lap_u_sq = 0.0;         // ||Lap u||_2^2
  double lap_b_sq = 0.0;
  double wp4 = 0.0;              // ||w+||_4^4
  double wm4 = 0.0;
  double grad_wp_sq_sq = 0.0;    // ||grad |w+|^2||_2^2
  double grad_wm_sq_sq = 0.0;
  double wp_grad_wp = 0.0;       // int |w+|^2 |grad w+|^2
  double wm_grad_wm = 0.0;
  double zderiv_terms[4] = {0.0, 0.0, 0.0, 0.0};  // I1..I4
  double h1_rhs = 0.0;           // the four cubic integrals
  double l4_terms[2] = {0.0, 0.0};  // J1, J2
  double div_u_max = 0.0;
  double div_b_max = 0.0;
  std::vector<double> criterion_norms;  // one per CriterionSpec

  [[nodiscard]] double zderiv_rhs() const noexcept {
    return zderiv_terms[0] + zderiv_terms[1] + zderiv_terms[2] + zderiv_terms[3];
  }
  [[nodiscard]] double l4_rhs() const noexcept { return l4_terms[0] + l4_terms[1]; }
};

/// `pressure` must come from pressure_solve(u - b, u + b).
SampleRecord sample(const State& state, const ScalarField& pressure,
                    const std::vector<CriterionSpec>& specs);
/// Solves for the pressure first.
SampleRecord sample(const State& state, const std::vector<CriterionSpec>& specs,
                    bool dealias = true);

/// Time series of samples with running time integrals.
class MonitorSeries {
 public:
  explicit MonitorSeries(std::vector<CriterionSpec> specs = {}, double nu = 1.0, double eta = 1.0);

  /// Throws TimeOrder unless record.t exceeds the last sample time, and
  /// std::invalid_argument if the record carries the wrong number of norms.
  void accumulate(SampleRecord record);

  [[nodiscard]] const std::vector<CriterionSpec>& specs() const noexcept { return specs_; }
  [[nodiscard]] double nu() const noexcept { return nu_; }
  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
  [[nodiscard]] const std::vector<SampleRecord>& samples() const noexcept { return samples_; }
  [[nodiscard]] const SampleRecord& operator[](std::size_t k) const { return samples_[k]; }
  [[nodiscard]] std::vector<double> times() const;

  /// M(t_k) for spec i: trapezoid of norm^beta, or the running sup for
  /// beta = infinity.
  [[nodiscard]] double criterion_integral(std::size_t spec, std::size_t k) const;
  [[nodiscard]] double criterion_integral(std::size_t spec) const;
  /// D(t_k) = int (||grad u_z||^2 + ||grad b_z||^2).
  [[nodiscard]] double dissipation_integral(std::size_t k) const { return d_[k]; }
  /// int (nu ||grad u||^2 + eta ||grad b||^2), integrating the cubic through
  /// four neighbouring samples on each interval (trapezoid below four samples).
  [[nodiscard]] double energy_dissipation(std::size_t k) const { return energy_diss_[k]; }

 private:
  std::vector<CriterionSpec> specs_;
  double nu_, eta_;
  std::vector<SampleRecord> samples_;
  std::vector<std::vector<double>> m_;  // m_[k][spec]
  std::vector<double> d_;
  std::vector<double> energy_diss_;
  double energy_settled_ = 0.0;  // intervals whose stencil is final
};

/// |E(t_k) + 2 int (nu ||grad u||^2 + eta ||grad b||^2) - E(0)| / E(0) with
/// E = ||u||^2 + ||b||^2, at the last sample unless k is given. Throws
/// DegenerateInput on an empty series.
double energy_residual(const MonitorSeries& series);
double energy_residual(const MonitorSeries& series, std::size_t k);

enum class Identity { zderiv, h1, l4 };

/// Per-sample residual |c dX/dt + D - RHS| / (X + 1) of an energy identity,
/// with dX/dt from the three-point stencil on the sample times (centred in the
/// interior, one-sided at the two ends):
///   zderiv: X = ||u_z||^2 + ||b_z||^2,  c = 1/2, D = nu ||grad u_z||^2 + eta ||grad b_z||^2
///   h1:     X = ||grad u||^2 + ||grad b||^2, c = 1/2, D = nu ||Lap u||^2 + eta ||Lap b||^2
///   l4:     X = ||w+||_4^4 + ||w-||_4^4, c = 1/4 (NaN unless nu == eta)
/// Throws WindowTooShort for fewer than three samples.
std::vector<double> identity_residuals(const MonitorSeries& series, Identity which);
std::vector<double> identity_residuals(const MonitorSeries& series, Identity which,
                                       std::size_t first, std::size_t count);
/// Largest residual over the interior samples, where the stencil is centred.
double identity_residual(const MonitorSeries& series, Identity which);

inline double zderiv_identity_residual(const MonitorSeries& s) { return identity_residual(s, Identity::zderiv); }
inline double h1_identity_residual(const MonitorSeries& s) { return identity_residual(s, Identity::h1); }
inline double l4_identity_residual(const MonitorSeries& s) { return identity_residual(s, Identity::l4); }

/// |sum of the H1 cubic integrals| / (||grad u||_3^3 + 3 ||grad u||_3 ||grad b||_3^2).
/// NaN when the denominator vanishes.
double h1_cubic_bound_ratio(const State& state);

struct HolderEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;          // NaN when undefined
  bool defined = false;        // rhs > 0
  bool constant_one = false;   // class (a): must satisfy ratio <= 1 + 1e-10
};

struct HolderReport {
  HolderExponents exponents;
  std::vector<HolderEntry> entries;

  /// Largest class-(a) ratio among defined entries (0 if none).
  [[nodiscard]] double max_constant_one_ratio() const;
  /// Every defined class-(b) ratio is finite.
  [[nodiscard]] bool constant_unknown_finite() const;
};

enum class HolderChain { velocity, pressure, both };

/// Throws InvalidExponent when alpha < 3 for the velocity chain or
/// alpha < 12/7 for the pressure chain.
HolderReport holder_chain_check(const State& state, const ScalarField& pressure,
                                const HolderExponents& exps, HolderChain chain = HolderChain::both);

}  // namespace mhdreg

#endif  // MHDREG_MONITORS_HPP_
