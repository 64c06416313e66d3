#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "mhdreg/cli.hpp"
#include "mhdreg/dynamics.hpp"
#include "mhdreg/inequality.hpp"
#include "mhdreg/monitors.hpp"
#include "mhdreg/report.hpp"
#include "mhdreg/spectral.hpp"

namespace py = pybind11;
using namespace mhdreg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid grid_of(const Array& a, int leading, double length) {
  if (a.ndim() != 3 + leading) throw py::value_error("expected a " + std::to_string(3 + leading) + "-d array");
  if (leading == 1 && a.shape(0) != 3) throw py::value_error("vector fields have shape (3, nx, ny, nz)");
  return Grid({static_cast<int>(a.shape(leading)), static_cast<int>(a.shape(leading + 1)),
               static_cast<int>(a.shape(leading + 2))},
              length);
}

ScalarField to_scalar(const Array& a, double length) {
  const Grid g = grid_of(a, 0, length);
  ScalarField f(g);
  std::memcpy(f.data(), a.data(), g.size() * sizeof(double));
  return f;
}

VectorField to_vector(const Array& a, double length) {
  const Grid g = grid_of(a, 1, length);
  VectorField v(g);
  for (int c = 0; c < 3; ++c) std::memcpy(v[c].data(), a.data() + c * g.size(), g.size() * sizeof(double));
  return v;
}

Array from_scalar(const ScalarField& f) {
  const Grid& g = f.grid();
  Array a({g.nx(), g.ny(), g.nz()});
  std::memcpy(a.mutable_data(), f.data(), g.size() * sizeof(double));
  return a;
}

Array from_vector(const VectorField& v) {
  const Grid& g = v.grid();
  Array a({3, g.nx(), g.ny(), g.nz()});
  for (int c = 0; c < 3; ++c) std::memcpy(a.mutable_data() + c * g.size(), v[c].data(), g.size() * sizeof(double));
  return a;
}

py::dict series_dict(const MonitorSeries& series) {
  const CsvTable t = parse_csv(monitor_csv(series));
  py::dict out;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    Array col(static_cast<py::ssize_t>(t.rows.size()));
    for (std::size_t k = 0; k < t.rows.size(); ++k) col.mutable_data()[k] = t.rows[k][c];
    out[py::str(t.header[c])] = col;
  }
  return out;
}

std::vector<CriterionSpec> parse_specs(const std::vector<std::string>& texts) {
  std::vector<CriterionSpec> out;
  for (const auto& t : texts) out.push_back(CriterionSpec::parse(t));
  return out;
}

InequalityCase make_case(const std::string& which, double mu, double lambda, double q) {
  InequalityCase c{parse_inequality(which), mu, lambda, q};
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_mhdreg, m) {
  m.doc() = "Pseudo-spectral MHD solver, regularity-criterion monitors and inequality checks";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidExponent>(m, "InvalidExponent", PyExc_ValueError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
  py::register_exception<NonLocalized>(m, "NonLocalized", PyExc_ValueError);
  py::register_exception<NotSolenoidal>(m, "NotSolenoidal", PyExc_ValueError);
  py::register_exception<UnsupportedGrid>(m, "UnsupportedGrid", PyExc_ValueError);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<BlowupDetected>(m, "BlowupDetected", PyExc_ArithmeticError);

  m.def(
      "lp_norm", [](const Array& f, double p, double length) { return lp_norm(to_scalar(f, length), p); },
      py::arg("field"), py::arg("p"), py::arg("length") = kTwoPi,
      "Riemann-sum L^p norm of a field sampled on an (nx, ny, nz) periodic grid; p may be inf.");

  m.def(
      "check_admissible",
      [](const std::string& kind, double alpha, double beta) {
        const CriterionSpec spec{parse_criterion_kind(kind), alpha, beta};
        spec.validate();
        const Admissibility a = check_admissible(spec);
        return py::make_tuple(a.admissible, a.slack);
      },
      py::arg("kind"), py::arg("alpha"), py::arg("beta"), "Returns (admissible, slack).");

  m.def(
      "initial_data",
      [](const std::string& kind, int n, double length, std::uint64_t seed, double amplitude, double epsilon,
         double k_max, double energy) {
        InitParams p;
        p.amplitude = amplitude;
        p.epsilon = epsilon;
        p.k_max = k_max;
        p.energy = energy;
        const State s = initial_data(parse_init_kind(kind), p, Grid(n, length), seed);
        return py::make_tuple(from_vector(s.u), from_vector(s.b));
      },
      py::arg("kind"), py::arg("n"), py::arg("length") = kTwoPi, py::arg("seed") = 0, py::arg("amplitude") = 1.0,
      py::arg("epsilon") = 0.1, py::arg("k_max") = 2.0, py::arg("energy") = 1.0, "Returns (u, b), each (3, n, n, n).");

  m.def(
      "pressure_solve",
      [](const Array& w_minus, const Array& w_plus, double length, bool dealias) {
        return from_scalar(pressure_solve(to_vector(w_minus, length), to_vector(w_plus, length), dealias));
      },
      py::arg("w_minus"), py::arg("w_plus"), py::arg("length") = kTwoPi, py::arg("dealias") = true);

  m.def(
      "simulate",
      [](const Array& u, const Array& b, double dt, double t_end, double nu, double eta,
         const std::vector<std::string>& criteria, int sample_every, bool dealias, const std::string& form,
         double length) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.nu = nu;
        cfg.eta = eta;
        cfg.dealias = dealias;
        cfg.form = parse_form(form);
        const auto specs = monitored_criteria(parse_specs(criteria));
        MonitorSeries series(specs, nu, eta);
        SimulationHooks hooks;
        hooks.sample_every = sample_every;
        hooks.on_sample = [&](const State& s, std::size_t) { series.accumulate(sample(s, specs, dealias)); };
        State init{to_vector(u, length), to_vector(b, length), 0.0};
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = simulate(init, cfg, hooks);
        }
        py::dict out;
        out["t"] = tr.final_state->t;
        out["u"] = from_vector(tr.final_state->u);
        out["b"] = from_vector(tr.final_state->b);
        out["steps"] = tr.steps;
        out["monitors"] = series_dict(series);
        out["energy_residual"] = series.empty() ? 0.0 : energy_residual(series);
        return out;
      },
      py::arg("u"), py::arg("b"), py::arg("dt"), py::arg("t_end"), py::arg("nu") = 1.0, py::arg("eta") = 1.0,
      py::arg("criteria") = std::vector<std::string>{}, py::arg("sample_every") = 1, py::arg("dealias") = true,
      py::arg("form") = "primitive", py::arg("length") = kTwoPi,
      "Integrates from t = 0 to t_end. Returns the final state and the monitor columns.");

  m.def(
      "inequality_ratio",
      [](const Array& phi, const std::string& which, double mu, double lambda, double q, double length) {
        return make_case(which, mu, lambda, q).ratio(to_scalar(phi, length));
      },
      py::arg("phi"), py::arg("which"), py::arg("mu") = 2.0, py::arg("lam") = 2.0, py::arg("q") = 6.0,
      py::arg("length") = kTwoPi, "Ratio of the left side to the right side of A1, A2 or A6 for one function.");

  m.def(
      "gaussian",
      [](int n, double sigma, double length) {
        return from_scalar(make_test_function(gaussian_spec(length, sigma), Grid(n, length)));
      },
      py::arg("n"), py::arg("sigma"), py::arg("length") = kTwoPi, "Periodized Gaussian at the box centre.");

  m.def(
      "empirical_constant",
      [](const std::string& which, const std::string& family, int n, std::size_t trials, std::uint64_t seed,
         double mu, double lambda, double q) {
        const InequalityCase c = make_case(which, mu, lambda, q);
        const EmpiricalConstant r = empirical_constant(parse_test_family(family), c, Grid(n), trials, seed);
        py::dict out;
        out["sup_ratio"] = r.sup_ratio;
        out["argmax"] = r.argmax;
        out["skipped"] = r.skipped;
        out["ratios"] = r.ratios;
        return out;
      },
      py::arg("which"), py::arg("family") = "anisotropic_gaussian", py::arg("n") = 32, py::arg("trials") = 10,
      py::arg("seed") = 0, py::arg("mu") = 2.0, py::arg("lam") = 2.0, py::arg("q") = 6.0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the mhdreg command line in-process. Returns (exit_code, stdout, stderr).");
}
