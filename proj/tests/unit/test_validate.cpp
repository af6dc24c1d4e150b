#include <gtest/gtest.h>

#include <cmath>

#include "perron/validate.hpp"

using namespace perron;

namespace {

cplx value(const Trajectory& tr, std::size_t k, int i = 0) { return std::exp(tr.log_scale[k]) * tr.state[k][i]; }

}  // namespace

TEST(Reference, ExponentialSolution) {
  const PerturbedODE ode{{-1.0, 0.0}, std::vector<Expr>(2), 0.0};
  const std::vector<cplx> y0 = {1.0, 1.0};
  const Trajectory tr = reference_integrate(ode, y0, 5.0, 0.01);
  const std::size_t last = tr.grid.size - 1;
  EXPECT_NEAR(tr.grid.at(last), 5.0, 1e-9);
  EXPECT_LE(std::abs(value(tr, last) / std::exp(5.0) - 1.0), 1e-8);
  const auto ld = log_derivative_profile(tr, 1);
  for (cplx v : ld.values) EXPECT_LE(std::abs(v - 1.0), 1e-9);
}

TEST(Reference, FifthOrderConvergence) {
  // y'' + y = 0 with y = cos t
  const PerturbedODE ode{{1.0, 0.0}, std::vector<Expr>(2), 0.0};
  const std::vector<cplx> y0 = {1.0, 0.0};
  auto err = [&](double h) {
    const Trajectory tr = reference_integrate(ode, y0, 10.0, h);
    return std::abs(value(tr, tr.grid.size - 1) - std::cos(10.0));
  };
  const double ratio = err(0.2) / err(0.1);
  EXPECT_GT(ratio, 20.0);
  EXPECT_LT(ratio, 45.0);
}

TEST(Fundamental, UnperturbedWronskian) {
  const PerturbedODE ode{{0.0, 4.0, 0.0, -5.0, 0.0}, std::vector<Expr>(5), 0.0};
  const std::vector<cplx> roots = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto trajs = fundamental_system(ode, roots, 10.0, 0.02);
  ASSERT_EQ(trajs.size(), 5u);
  const WronskianCheck w = wronskian_check(trajs, 0.0);
  EXPECT_NEAR(std::abs(w.vandermonde), 288.0, 1e-9);
  EXPECT_LE(w.max_rel_deviation, 1e-6);
  // each member follows its own exponential, dominant and sub-dominant alike
  for (std::size_t j = 0; j < 5; ++j) {
    const auto ld = log_derivative_profile(trajs[j], 1);
    for (std::size_t k = 0; k < ld.values.size(); k += 50) EXPECT_LE(std::abs(ld.values[k] - roots[j]), 1e-6) << j;
  }
}

// First-order estimate: y'/y - λ ≈ κ_λ P(r;λ) for slowly varying r, κ_λ = 1/P'(λ).
TEST(Fundamental, PerturbedLogDerivativesFollowFirstOrderEstimate) {
  const Expr s = parse_expr("(t^2+1)^(-1/3)");
  const PerturbedODE ode{{0.0, 4.0, 0.0, -5.0, 0.0}, {s, s, Expr(), parse_expr("t^(-2/3)"), Expr()}, 10.0};
  const std::vector<cplx> roots = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto trajs = fundamental_system(ode, roots, 40.0, 0.02);
  const double t = 38.0;
  const std::size_t k = 1400;
  const double sv = std::pow(t * t + 1, -1.0 / 3.0), r3 = std::pow(t, -2.0 / 3.0);
  for (std::size_t j = 0; j < 5; ++j) {
    const double l = roots[j].real();
    const double dP = 5 * l * l * l * l - 15 * l * l + 4;
    const double est = (sv + sv * l + r3 * l * l * l) / dP;
    ASSERT_NEAR(trajs[j].grid.at(k), t, 1e-9);
    const cplx dev = log_derivative_profile(trajs[j], 1).values[k] - roots[j];
    EXPECT_LE(std::abs(dev + est), 0.35 * std::abs(est)) << j;
  }
}
