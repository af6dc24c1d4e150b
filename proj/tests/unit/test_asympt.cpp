#include <gtest/gtest.h>

#include <cmath>

#include "perron/asympt.hpp"
#include "perron/charpoly.hpp"
#include "perron/ladder.hpp"
#include "perron/quadrature.hpp"
#include "perron/riccati.hpp"
#include "perron/solver.hpp"

using namespace perron;

namespace {

struct Case {
  PerturbedODE ode;
  RiccatiSystem sys;
  SpectralData s;
  WorkingGrid wg;
};

Case setup(std::vector<Expr> r, double lambda, double t0, double t_end) {
  Case u;
  u.ode = {{0.0, 4.0, 0.0, -5.0, 0.0}, std::move(r), t0};
  u.sys = build_riccati(u.ode, lambda);
  u.s = spectral_data(find_roots(u.ode.charpoly()), lambda);
  u.wg = make_working_grid(u.s, t0, t_end, 0.02, QuadConfig{});
  return u;
}

std::vector<Expr> example_r() {
  const Expr s = parse_expr("(t^2+1)^(-1/3)");
  return {s, s, Expr(), parse_expr("t^(-2/3)"), Expr()};
}

double loglog_slope(const AsymptoticReport& rep, double t1, double t2) {
  const double e1 = eval_formula(rep, t1).envelope, e2 = eval_formula(rep, t2).envelope;
  return std::log(e2 / e1) / std::log(t2 / t1);
}

}  // namespace

TEST(Ladder, FirstRungIsGreenOfForcing) {
  const Case u = setup(example_r(), 1.0, 10.0, 50.0);
  const ThetaLadder lad = theta_ladder(u.sys, u.s, u.wg.grid, 2);
  ASSERT_EQ(lad.depth(), 2);
  EXPECT_TRUE(lad.explicit_n5);
  const GreenStack th = GreenBank(u.s, u.wg.grid, 8).solve(sample_system(u.sys, u.wg.grid).P);
  for (std::size_t k = 0; k < u.wg.grid.size; k += 37)
    for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(lad.theta[0].derivs[i][k] - th.derivs[i][k]), 1e-14);
}

TEST(Ladder, ZeroPerturbationGivesZeroRungs) {
  const Case u = setup(std::vector<Expr>(5), -1.0, 0.0, 10.0);
  for (LadderMode mode : {LadderMode::kGeneric, LadderMode::kExplicit5}) {
    const ThetaLadder lad = theta_ladder(u.sys, u.s, u.wg.grid, 3, nullptr, mode);
    for (int l = 0; l < 3; ++l)
      for (std::size_t k = 0; k < u.wg.grid.size; ++k) EXPECT_EQ(lad.theta[l].norm_at(k), 0.0);
  }
}

TEST(Ladder, ModesAgree) {
  const Case u = setup(example_r(), 0.0, 10.0, 30.0);
  const ThetaLadder a = theta_ladder(u.sys, u.s, u.wg.grid, 3, nullptr, LadderMode::kGeneric);
  const ThetaLadder b = theta_ladder(u.sys, u.s, u.wg.grid, 3, nullptr, LadderMode::kExplicit5);
  for (std::size_t k = 0; k < u.wg.grid.size; k += 11)
    for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(a.sum(k, i) - b.sum(k, i)), 1e-12 * (1 + std::abs(a.sum(k, i))));
}

TEST(Asympt, NamesRoundTrip) {
  for (FormulaKind k : {FormulaKind::kGeneral, FormulaKind::kLevinson, FormulaKind::kHartmanWintner,
                        FormulaKind::kRefined, FormulaKind::kRefinedRemainder, FormulaKind::kLadder})
    EXPECT_EQ(formula_from_name(formula_name(k)), k);
}

TEST(Asympt, PrefactorAtOne) {
  const Case u = setup(example_r(), 1.0, 10.0, 50.0);
  const AsymptoticReport rep = assemble_levinson(u.sys, u.s, u.wg);
  EXPECT_NEAR(rep.kappa.real(), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(rep.kappa.imag(), 0.0, 1e-14);
}

TEST(Asympt, LevinsonEnvelopeSlope) {
  const Expr r = parse_expr("t^(-2)");
  const Case u = setup({r, r, Expr(), r, Expr()}, 1.0, 5.0, 120.0);
  const AsymptoticReport rep = assemble_levinson(u.sys, u.s, u.wg);
  EXPECT_NEAR(loglog_slope(rep, 20.0, 60.0), -1.0, 0.2);
  for (double e : rep.envelope) EXPECT_GE(e, 0.0);
  for (std::size_t k = 1; k < rep.envelope.size(); ++k) EXPECT_LE(rep.envelope[k], rep.envelope[k - 1] * (1 + 1e-9));
}

TEST(Asympt, RefinedRemainderDecay) {
  const Case u = setup(example_r(), 1.0, 10.0, 80.0);
  const AsymptoticReport rep = assemble_refined(u.sys, u.s, u.wg, false);
  for (double e : rep.envelope) EXPECT_GE(e, 0.0);
  // R(θ) ~ r^2 ~ t^{-4/3}; its tail integral decays like t^{-1/3}
  EXPECT_NEAR(loglog_slope(rep, 20.0, 40.0), -1.0 / 3.0, 0.15);
}

TEST(Asympt, GeneralFactorisationIsExact) {
  const Case u = setup(example_r(), 1.0, 10.0, 50.0);
  const ZSolution z = picard_solve(u.sys, u.s, u.wg);
  const AsymptoticReport rep = assemble_general(u.sys, u.s, z);
  const UniformGrid& g = rep.grid;
  std::vector<cplx> zz(z.derivs[0].begin(), z.derivs[0].begin() + g.size);
  const auto iz = cumulative_integral(g, zz);
  for (std::size_t k = 0; k < g.size; k += 50) {
    cplx total = rep.remainder_log[k];
    for (const auto& f : rep.factors) total += f.log_value[k];
    EXPECT_LE(std::abs(total - (1.0 * (g.at(k) - g.t0) + iz[k])), 1e-8) << g.at(k);
  }
}

TEST(Asympt, UnperturbedIsExponential) {
  const Case u = setup(std::vector<Expr>(5), 2.0, 0.0, 5.0);
  const ZSolution z = picard_solve(u.sys, u.s, u.wg);
  for (const AsymptoticReport& rep :
       {assemble_general(u.sys, u.s, z), assemble_hw(u.sys, u.s, z), assemble_levinson(u.sys, u.s, u.wg),
        assemble_refined(u.sys, u.s, u.wg, true, &z)}) {
    for (double t : {0.5, 2.5, 4.5}) {
      const FormulaValue v = eval_formula(rep, t);
      EXPECT_LE(std::abs(v.log_y - 2.0 * t), 1e-10);
      EXPECT_LE(std::abs(v.log_derivative - 2.0), 1e-10);
    }
  }
}
