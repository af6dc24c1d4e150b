#include <gtest/gtest.h>

#include <random>

#include "perron/bellpoly.hpp"
#include "perron/charpoly.hpp"
#include "perron/error.hpp"
#include "perron/riccati.hpp"
#include "perron/solver.hpp"

using namespace perron;

namespace {

PerturbedODE example(double t0 = 1.0) {
  const Expr s = parse_expr("(t^2+1)^(-1/3)");
  return {{0.0, 4.0, 0.0, -5.0, 0.0}, {s, s, Expr(), parse_expr("t^(-2/3)"), Expr()}, t0};
}

const FTerm* find_term(const RiccatiSystem& sys, const Exponents& e) {
  for (const auto& f : sys.f_terms)
    if (f.exps == e) return &f;
  return nullptr;
}

}  // namespace

TEST(Riccati, RejectsNonRoot) { EXPECT_THROW(build_riccati(example(), 0.5), PreconditionError); }

TEST(Riccati, TildeCoefficients) {
  const PerturbedODE ode = example();
  for (double l : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const RiccatiSystem sys = build_riccati(ode, l);
    for (int i = 0; i <= 5; ++i)
      EXPECT_NEAR(std::abs(sys.tilde_a(i) - poly_derivative_at(ode.charpoly(), l, i)), 0.0, 1e-12);
    EXPECT_NEAR(sys.tilde_a(3).real(), 10 * l * l - 5, 1e-12);
  }
}

TEST(Riccati, FifthOrderLinearPart) {
  const PerturbedODE ode = example();
  for (double l : {-1.0, 2.0}) {
    const RiccatiSystem sys = build_riccati(ode, l);
    const double t = 3.0;
    const auto r = ode.r_at(t);
    const std::vector<cplx> Z = {cplx(0.1, 0.2), cplx(-0.3, 0.0), cplx(0.05, -0.1), cplx(0.7, 0.0)};
    const cplx expect = (3.0 * r[3] * l * l + r[1]) * Z[0] + 3.0 * r[3] * l * Z[1] + r[3] * Z[2];
    EXPECT_LE(std::abs(sys.eval_L(r, Z) - expect), 1e-14);
  }
}

TEST(Riccati, FifthOrderNonlinearCoefficients) {
  const RiccatiSystem sys0 = build_riccati(example(), 0.0);
  // z^2 carries ã_2 = 10λ^3 - 15λ, zero at λ = 0
  const FTerm* z0 = find_term(sys0, {2, 0, 0, 0});
  ASSERT_NE(z0, nullptr);
  EXPECT_EQ(z0->constant, cplx(0.0));
  const RiccatiSystem sys1 = build_riccati(example(), 1.0);
  const FTerm* z2 = find_term(sys1, {2, 0, 0, 0});
  ASSERT_NE(z2, nullptr);
  EXPECT_NEAR(z2->constant.real(), -5.0, 1e-12);
  EXPECT_NEAR(z2->r_coeff[3].real(), 3.0, 1e-12);  // C(3,2) λ
  const FTerm* zz = find_term(sys1, {0, 1, 1, 0});
  ASSERT_NE(zz, nullptr);
  EXPECT_EQ(zz->constant, cplx(10.0));
  for (cplx c : zz->r_coeff) EXPECT_EQ(c, cplx(0.0));
}

TEST(Riccati, DegreeStructure) {
  for (int n : {3, 5, 7}) {
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) roots.emplace_back(-2.0 + 0.8 * i, 0.1 * i);
    const CharPoly p = CharPoly::from_roots(roots);
    std::vector<cplx> a(p.coefficients().begin(), p.coefficients().end() - 1);
    PerturbedODE ode{a, std::vector<Expr>(n, Expr::number(0.01)), 0.0};
    const RiccatiSystem sys = build_riccati(ode, roots[1]);
    int top = 0;
    for (const auto& f : sys.f_terms) {
      EXPECT_GE(f.degree, 2);
      EXPECT_LE(f.degree, n);
      EXPECT_EQ(total_degree(f.exps), f.degree);
      if (f.degree == n) {
        ++top;
        Exponents e(n - 1, 0);
        e[0] = n;
        EXPECT_EQ(f.exps, e);
        EXPECT_EQ(f.constant, cplx(1.0));
      }
    }
    EXPECT_EQ(top, 1);
  }
}

// Oracle: expand Σ (a_i + r_i) B_i(λ+z, z', ...) directly and strip the constant and linear parts.
TEST(Riccati, SixthOrderAgainstDirectExpansion) {
  const int n = 6;
  const std::vector<cplx> roots = {cplx(-2.5, 0.3), -1.2, cplx(-0.3, -0.5), 0.6, cplx(1.4, 0.2), 2.3};
  const CharPoly p = CharPoly::from_roots(roots);
  std::vector<cplx> a(p.coefficients().begin(), p.coefficients().end() - 1);
  std::vector<Expr> r;
  for (int i = 0; i < n; ++i) r.push_back(Expr::number(cplx(0.01 * (i + 1), -0.02 * i)));
  const PerturbedODE ode{a, r, 0.0};
  std::mt19937_64 g(42);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (cplx lambda : {roots[1], roots[4]}) {
    const RiccatiSystem sys = build_riccati(ode, lambda);
    const auto rv = ode.r_at(0.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<cplx> Zfull(n);
      for (auto& v : Zfull) v = {u(g), u(g)};
      cplx E = 0.0;
      for (int i = 0; i <= n; ++i) {
        const cplx coef = i == n ? cplx(1.0) : a[i] + rv[i];
        E += coef * bell_shift_expand(i, lambda).evaluate(std::span(Zfull).first(i));
      }
      const std::span<const cplx> Z(Zfull.data(), n - 1);
      const cplx F = E - PerturbationBundle::p_r_lambda(rv, lambda, 0) - sys.eval_D(Zfull) - sys.eval_L(rv, Z);
      EXPECT_LE(std::abs(sys.eval_F(rv, Z) - F), 1e-11 * (1 + std::abs(F)));
    }
  }
}

TEST(Riccati, ManufacturedForcing) {
  PerturbedODE ode = example(1.0);
  ode.r = std::vector<Expr>(5);
  RiccatiSystem sys = build_riccati(ode, 1.0);
  sys.forcing_override = [](double t) { return cplx(0.05 / ((1 + t) * (1 + t)), 0.01 * std::exp(-t)); };
  const SpectralData s = spectral_data(find_roots(ode.charpoly()), 1.0);
  const QuadConfig q;
  const WorkingGrid wg = make_working_grid(s, 1.0, 20.0, 0.02, q);
  const ZSolution z = picard_solve(sys, s, wg);
  ASSERT_TRUE(z.converged);
  double worst = 0.0;
  for (std::size_t k = 10; k + 10 < wg.report_size; ++k) worst = std::max(worst, std::abs(riccati_residual(sys, z, k)));
  EXPECT_LE(worst, 1e-6);
}
