#include <gtest/gtest.h>

#include <cmath>

#include "perron/expr.hpp"
#include "perron/perturb.hpp"
#include "perron/quadrature.hpp"

using namespace perron;

namespace {

std::vector<Expr> example_r() {
  const Expr s = parse_expr("(t^2+1)^(-1/3)");
  return {s, s, Expr(), parse_expr("t^(-2/3)"), Expr()};
}

}  // namespace

TEST(Perturb, ReducedPolynomialExample) {
  for (double lambda : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const PerturbationBundle b(example_r(), lambda);
    for (double t : {1.0, 10.0, 40.0}) {
      const double s = std::pow(t * t + 1, -1.0 / 3.0), r3 = std::pow(t, -2.0 / 3.0);
      EXPECT_NEAR(b.p_r_lambda(0, t).real(), s + s * lambda + r3 * lambda * lambda * lambda, 1e-14);
      EXPECT_NEAR(b.p_r_lambda(1, t).real(), 3 * r3 * lambda * lambda + s, 1e-14);
      EXPECT_NEAR(b.p_r_lambda(3, t).real(), r3, 1e-15);
      EXPECT_EQ(b.p_r_lambda(4, t), cplx(0.0));
      EXPECT_EQ(b.p_r_lambda(5, t), cplx(0.0));
    }
  }
}

// (1/k!) ∂^k_λ P(r;λ) against central differences in λ.
TEST(Perturb, LambdaDerivativeByFiniteDifference) {
  const std::vector<cplx> r = {cplx(0.3, 0.1), cplx(-0.2, 0.0), cplx(0.5, -0.4), cplx(0.1, 0.2), cplx(-0.7, 0.0)};
  const cplx l(0.4, -0.3);
  const double h = 1e-4;
  auto P = [&](cplx x) { return PerturbationBundle::p_r_lambda(r, x, 0); };
  const cplx d1 = (P(l + h) - P(l - h)) / (2 * h);
  const cplx d2 = (P(l + h) - 2.0 * P(l) + P(l - h)) / (h * h);
  EXPECT_LE(std::abs(PerturbationBundle::p_r_lambda(r, l, 1) - d1), 1e-7);
  EXPECT_LE(std::abs(PerturbationBundle::p_r_lambda(r, l, 2) - d2 / 2.0), 1e-5);
}

TEST(Perturb, OdeHelpers) {
  PerturbedODE ode{{0.0, 4.0, 0.0, -5.0, 0.0}, example_r(), 1.0};
  EXPECT_EQ(ode.order(), 5);
  EXPECT_FALSE(ode.unperturbed());
  const auto v = ode.r_at(8.0);
  EXPECT_NEAR(v[3].real(), 0.25, 1e-15);
  EXPECT_EQ(v[2], cplx(0.0));
  PerturbedODE zero{{0.0, 4.0, 0.0, -5.0, 0.0}, std::vector<Expr>(5), 0.0};
  EXPECT_TRUE(zero.unperturbed());
}

TEST(Smallness, ConstantPerturbation) {
  const UniformGrid g = UniformGrid::covering(0.0, 10.0, 0.05);
  const auto d = smallness_diagnostics(Expr::number(1.0), 1.0, g, QuadConfig{});
  for (std::size_t k = 0; k < g.size; ++k) {
    const double H = d.horizon - d.t[k];
    EXPECT_NEAR(d.r_star[k], 1.0, 1e-13);
    EXPECT_NEAR(d.r_bar[k], H / (1.0 + H), 1e-10);
    EXPECT_NEAR(d.i_gamma[k], 1.0 - std::exp(-H), 1e-9);
  }
}

TEST(Smallness, DecayingPerturbation) {
  const UniformGrid g = UniformGrid::covering(1.0, 40.0, 0.05);
  const auto d = smallness_diagnostics(parse_expr("t^(-2/3)"), -2.0, g, QuadConfig{});
  for (std::size_t k = 0; k < g.size; ++k) {
    const double t = d.t[k];
    EXPECT_NEAR(d.r_star[k], 3 * (std::cbrt(t + 1) - std::cbrt(t)), 1e-10);
    EXPECT_LE(d.i_gamma[k], 0.5 * std::pow(1.0, -2.0 / 3.0) + 1e-12);
    if (k) {
      EXPECT_LT(d.r_star[k], d.r_star[k - 1]);
      EXPECT_LE(d.r_bar[k], d.r_bar[k - 1] + 1e-12);
    }
  }
}
