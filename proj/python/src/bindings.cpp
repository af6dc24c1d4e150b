#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "perron/acceptance.hpp"
#include "perron/asympt.hpp"
#include "perron/bellpoly.hpp"
#include "perron/charpoly.hpp"
#include "perron/config.hpp"
#include "perron/error.hpp"
#include "perron/example5.hpp"
#include "perron/expr.hpp"
#include "perron/ladder.hpp"
#include "perron/riccati.hpp"
#include "perron/solver.hpp"

namespace py = pybind11;
using namespace perron;

namespace {

struct Prepared {
  RunConfig cfg;
  PerturbedODE ode;
  SpectralData s;
  RiccatiSystem sys;
  WorkingGrid wg;
};

Prepared prepare(const std::string& config_text) {
  Prepared p;
  p.cfg = parse_config(config_text);
  p.ode = p.cfg.ode();
  const auto roots = find_roots(p.ode.charpoly());
  p.s = spectral_data(roots, p.cfg.select_lambda(roots), p.cfg.beta);
  p.sys = build_riccati(p.ode, p.s.lambda);
  p.wg = make_working_grid(p.s, p.cfg.t0, p.cfg.t_end, p.cfg.step, p.cfg.quad);
  return p;
}

PicardOptions picard_of(const Prepared& p) {
  PicardOptions o = p.cfg.picard;
  o.quad_order = p.cfg.quad.panel_order;
  return o;
}

py::dict spectral_dict(const SpectralData& s) {
  py::dict d;
  d["roots"] = s.roots;
  d["lambda"] = s.lambda;
  d["gamma"] = s.gamma;
  d["Gamma"] = s.Gamma;
  d["alpha"] = s.alpha;
  d["alpha_tilde"] = s.alpha_tilde;
  d["gamma_tilde"] = s.gamma_tilde;
  d["beta"] = s.beta;
  d["kappa"] = s.kappa();
  d["weights_ok"] = partial_fraction_weights_check(s).ok;
  return d;
}

py::dict contraction_dict(const ContractionReport& c) {
  py::dict d;
  d["L0"] = c.L0;
  d["L_beta"] = c.L_beta;
  d["Q0"] = c.Q0;
  d["Q_beta"] = c.Q_beta;
  d["M"] = c.M;
  d["m_M"] = c.m_M;
  d["eps0"] = c.eps0;
  d["K"] = c.K;
  d["N"] = c.N;
  d["cl0_holds"] = c.cl0_holds;
  d["contraction_certified"] = c.contraction_certified;
  d["first_admissible_t"] = c.first_admissible_t;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymptotic integration of perturbed constant-coefficient linear ODEs";
  m.attr("__version__") = tool_version();

  // Translators are tried newest first, so the base class goes in before its subclasses.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

  m.def("complete_bell", [](int i) { return to_string(complete_bell(i)); }, py::arg("i"),
        "Complete Bell polynomial B_i as canonical text.");
  m.def("nonlinear_remainder", [](int i) { return to_string(nonlinear_remainder(i)); }, py::arg("i"));
  m.def("eval_bell", [](int i, std::vector<cplx> x) { return eval_poly(complete_bell(i), x); }, py::arg("i"),
        py::arg("x"));

  m.def("find_roots", [](std::vector<cplx> lower) { return find_roots(CharPoly(std::move(lower))); },
        py::arg("coefficients"), "Roots of x^n + a_{n-1}x^{n-1} + ... + a_0, sorted by (Re, Im).");
  m.def("spectral_data",
        [](std::vector<cplx> roots, cplx lambda, std::optional<double> beta) {
          return spectral_dict(spectral_data(roots, lambda, beta));
        },
        py::arg("roots"), py::arg("lam"), py::arg("beta") = py::none());

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text) { return parse_expr(text); }), py::arg("text"))
      .def("__call__", &Expr::evaluate, py::arg("t"))
      .def("__str__", &Expr::to_string)
      .def("__repr__", [](const Expr& e) { return "Expr('" + e.to_string() + "')"; });

  m.def("analyze",
        [](const std::string& text) {
          const Prepared p = prepare(text);
          py::dict d;
          d["config_hash"] = p.cfg.hash();
          d["spectral"] = spectral_dict(p.s);
          d["contraction"] = contraction_dict(contraction_constants(p.sys, p.s, p.wg, p.cfg.quad, p.cfg.ball_M));
          return d;
        },
        py::arg("config_text"));

  m.def("solve",
        [](const std::string& text) {
          const Prepared p = prepare(text);
          const ZSolution z = picard_solve(p.sys, p.s, p.wg, picard_of(p));
          std::vector<double> t(z.report_size);
          for (std::size_t k = 0; k < z.report_size; ++k) t[k] = p.wg.grid.at(k);
          std::vector<std::vector<cplx>> derivs;
          for (const auto& row : z.derivs) derivs.emplace_back(row.begin(), row.begin() + z.report_size);
          py::dict d;
          d["t"] = t;
          d["z"] = derivs;
          d["iterations"] = z.iterations;
          d["converged"] = z.converged;
          d["final_residual"] = z.final_residual;
          d["measured_ratio"] = z.measured_ratio;
          return d;
        },
        py::arg("config_text"), "Picard solution z and its derivatives on [t0, t_end].");

  m.def("formula_json",
        [](const std::string& text, const std::string& kind_name) {
          const Prepared p = prepare(text);
          const FormulaKind kind = formula_from_name(kind_name);
          AsymptoticReport rep;
          if (kind == FormulaKind::kLevinson) {
            rep = assemble_levinson(p.sys, p.s, p.wg, p.cfg.quad.panel_order);
          } else if (kind == FormulaKind::kRefined) {
            rep = assemble_refined(p.sys, p.s, p.wg, false, nullptr, p.cfg.quad.panel_order);
          } else {
            const ZSolution z = picard_solve(p.sys, p.s, p.wg, picard_of(p));
            if (kind == FormulaKind::kGeneral) rep = assemble_general(p.sys, p.s, z, p.cfg.quad.panel_order);
            else if (kind == FormulaKind::kHartmanWintner) rep = assemble_hw(p.sys, p.s, z, p.cfg.quad.panel_order);
            else if (kind == FormulaKind::kRefinedRemainder)
              rep = assemble_refined(p.sys, p.s, p.wg, true, &z, p.cfg.quad.panel_order);
            else
              rep = assemble_ladder(p.sys,
                                    theta_ladder(p.sys, p.s, p.wg.grid, p.cfg.ladder_depth, &z, LadderMode::kAuto,
                                                 p.cfg.quad.panel_order),
                                    p.wg);
          }
          return to_json(rep).dump();
        },
        py::arg("config_text"), py::arg("kind") = "refined_remainder");

  m.def("example5_json", [] { return example5_harness().to_json().dump(); });

  m.def("run_check",
        [](int id, std::uint64_t seed) {
          const CheckResult r = run_check(id, seed);
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["summary"] = r.summary;
          d["line"] = format_line(r);
          return d;
        },
        py::arg("id"), py::arg("seed") = kAcceptanceSeed);
  m.attr("ACCEPTANCE_COUNT") = kAcceptanceCount;
}
