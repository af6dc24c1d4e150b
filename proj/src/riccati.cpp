#include "perron/riccati.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "perron/error.hpp"

namespace perron {

std::vector<cplx> GreenStack::stack(std::size_t k) const {
  std::vector<cplx> out(derivs.size());
  for (std::size_t i = 0; i < derivs.size(); ++i) out[i] = derivs[i][k];
  return out;
}

double GreenStack::norm_at(std::size_t k) const {
  double s = 0.0;
  for (const auto& row : derivs) s += std::abs(row[k]);
  return s;
}

cplx RiccatiSystem::tilde_a(int i) const {
  cplx acc = 0.0, lp = 1.0;
  for (int j = 0; j <= order - i; ++j) {
    acc += binomial(i + j, j) * a[i + j] * lp;
    lp *= lambda;
  }
  return acc;
}

cplx RiccatiSystem::tilde_r(int i, std::span<const cplx> r) const {
  cplx acc = 0.0, lp = 1.0;
  for (int j = 0; i + j <= order - 1; ++j) {
    acc += binomial(i + j, j) * r[i + j] * lp;
    lp *= lambda;
  }
  return acc;
}

cplx RiccatiSystem::forcing(std::span<const cplx> r, double t) const {
  if (forcing_override) return forcing_override(t);
  return PerturbationBundle::p_r_lambda(r, lambda, 0);
}

cplx RiccatiSystem::eval_L(std::span<const cplx> r, std::span<const cplx> Z) const {
  cplx acc = 0.0;
  for (int k = 1; k <= order - 1; ++k) acc += PerturbationBundle::p_r_lambda(r, lambda, k) * Z[k - 1];
  return acc;
}

cplx RiccatiSystem::eval_F(std::span<const cplx> r, std::span<const cplx> Z) const {
  const std::size_t m = Z.size();
  if (static_cast<int>(m) != order - 1) throw PreconditionError("eval_F: Z must hold n-1 derivatives");
  // power table Z[v]^e for e <= n
  std::vector<cplx> pw(m * (order + 1));
  for (std::size_t v = 0; v < m; ++v) {
    pw[v * (order + 1)] = 1.0;
    for (int e = 1; e <= order; ++e) pw[v * (order + 1) + e] = pw[v * (order + 1) + e - 1] * Z[v];
  }
  cplx acc = 0.0;
  for (const FTerm& term : f_terms) {
    cplx c = term.constant;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (term.r_coeff[i] != 0.0) c += term.r_coeff[i] * r[i];
    for (std::size_t v = 0; v < m; ++v)
      if (term.exps[v]) c *= pw[v * (order + 1) + term.exps[v]];
    acc += c;
  }
  return acc;
}

cplx RiccatiSystem::eval_D(std::span<const cplx> Zfull) const {
  cplx acc = 0.0;
  for (int m = 0; m < order; ++m) acc += d[m] * Zfull[m];
  return acc;
}

RiccatiSystem build_riccati(const PerturbedODE& ode, cplx lambda) {
  const int n = ode.order();
  if (n < 2) throw PreconditionError("build_riccati: order must be >= 2");
  const CharPoly p = ode.charpoly();
  double scale = 0.0, lp = 1.0;
  for (cplx c : p.coefficients()) {
    scale += std::abs(c) * lp;
    lp *= std::abs(lambda);
  }
  if (std::abs(p(lambda)) > 1e-8 * scale) {
    std::ostringstream os;
    os << "build_riccati: lambda " << lambda << " is not a root (|P(lambda)| = " << std::abs(p(lambda)) << ")";
    throw PreconditionError(os.str());
  }
  RiccatiSystem sys;
  sys.order = n;
  sys.lambda = lambda;
  sys.a = p.coefficients();
  sys.d = derivative_operator_coefficients(p, lambda);
  std::vector<Expr> r = ode.r;
  r.resize(n);
  sys.bundle = PerturbationBundle(std::move(r), lambda);

  const std::size_t arity = static_cast<std::size_t>(n - 1);
  std::map<Exponents, FTerm, GradedLexGreater> acc;
  for (int i = 2; i <= n; ++i) {
    const IntPoly f = nonlinear_remainder(i - 1).extended(arity);
    cplx lj = 1.0;
    for (int j = 0; j <= n - i; ++j) {
      const double c = binomial(i + j, j);
      for (const auto& [e, coeff] : f.terms()) {
        FTerm& t = acc[e];
        if (t.r_coeff.empty()) {
          t.exps = e;
          t.r_coeff.assign(n, 0.0);
          t.degree = total_degree(e);
        }
        const cplx w = c * lj * static_cast<double>(coeff);
        t.constant += w * sys.a[i + j];
        if (i + j <= n - 1) t.r_coeff[i + j] += w;
      }
      lj *= lambda;
    }
  }
  for (auto& [e, t] : acc) {
    bool any = t.constant != 0.0;
    for (cplx c : t.r_coeff) any = any || c != 0.0;
    if (any) sys.f_terms.push_back(std::move(t));
  }
  return sys;
}

cplx eval_F(const RiccatiSystem& sys, double t, std::span<const cplx> Z) {
  const auto r = sys.bundle.evaluate(t);
  return sys.eval_F(r, Z);
}

cplx riccati_residual(const RiccatiSystem& sys, const GreenStack& z, std::size_t k) {
  const int n = sys.order;
  if (z.order() != n) throw PreconditionError("riccati_residual: derivative stack has the wrong order");
  if (k >= z.size()) throw PreconditionError("riccati_residual: node out of range");
  const double t = z.grid.at(k);
  const auto r = sys.bundle.evaluate(t);
  std::vector<cplx> full = z.stack(k);
  const std::vector<cplx> Z = full;
  full.push_back(z.top[k]);
  return sys.eval_D(full) + sys.forcing(r, t) + sys.eval_L(r, Z) + sys.eval_F(r, Z);
}

cplx riccati_residual(const RiccatiSystem& sys, const GreenStack& z, double t) {
  const double x = (t - z.grid.t0) / z.grid.step;
  const double kr = std::round(x);
  if (std::abs(x - kr) > 1e-6 || kr < 0 || kr >= static_cast<double>(z.size()))
    throw PreconditionError("riccati_residual: t is not a grid node");
  return riccati_residual(sys, z, static_cast<std::size_t>(kr));
}

namespace {

std::string deriv_name(std::size_t m) {
  if (m == 0) return "z";
  if (m <= 3) return "z" + std::string(m, '\'');
  return "z^(" + std::to_string(m) + ")";
}

std::string num(cplx c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

std::string to_string(const RiccatiSystem& sys) {
  std::ostringstream os;
  const int n = sys.order;
  os << "lambda = " << num(sys.lambda) << "\n";
  os << "D z =";
  for (int m = 0; m < n; ++m) os << (m ? " + " : " ") << num(sys.d[m]) << "*" << deriv_name(m);
  os << "\nP(r;lambda) = ";
  {
    bool first = true;
    cplx lp = 1.0;
    for (int i = 0; i < n; ++i) {
      const auto& e = sys.bundle.expressions()[i];
      if (!e.empty() && !(e.is_constant() && e.evaluate(0.0) == 0.0)) {
        os << (first ? "" : " + ") << num(lp) << "*(" << e.to_string() << ")";
        first = false;
      }
      lp *= sys.lambda;
    }
    if (first) os << "0";
  }
  os << "\nL(t,z) = sum_k (1/k!) d^k P(r;lambda) z^(k-1), k = 1.." << n - 1;
  os << "\nF(t,Z) =";
  bool first = true;
  for (const FTerm& t : sys.f_terms) {
    std::string mono;
    for (std::size_t v = 0; v < t.exps.size(); ++v) {
      if (!t.exps[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += deriv_name(v);
      if (t.exps[v] > 1) mono += "^" + std::to_string(t.exps[v]);
    }
    std::string coeff;
    if (t.constant != 0.0) coeff = num(t.constant);
    for (std::size_t i = 0; i < t.r_coeff.size(); ++i)
      if (t.r_coeff[i] != 0.0) coeff += (coeff.empty() ? "" : " + ") + num(t.r_coeff[i]) + "*r" + std::to_string(i);
    os << (first ? " " : "\n       + ") << "[" << coeff << "]*" << mono;
    first = false;
  }
  if (first) os << " 0";
  os << "\n";
  return os.str();
}

SystemSamples sample_system(const RiccatiSystem& sys, const UniformGrid& grid) {
  SystemSamples s;
  const int n = sys.order;
  s.r.resize(grid.size);
  s.P.resize(grid.size);
  s.Lc.resize(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) {
    const double t = grid.at(k);
    s.r[k] = sys.bundle.evaluate(t);
    s.P[k] = sys.forcing(s.r[k], t);
    s.Lc[k].resize(n - 1);
    for (int m = 1; m <= n - 1; ++m) s.Lc[k][m - 1] = PerturbationBundle::p_r_lambda(s.r[k], sys.lambda, m);
  }
  return s;
}

}  // namespace perron
