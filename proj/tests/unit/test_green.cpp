#include <gtest/gtest.h>

#include <cmath>

#include "perron/charpoly.hpp"
#include "perron/error.hpp"
#include "perron/green.hpp"
#include "perron/quadrature.hpp"

using namespace perron;

namespace {

std::vector<cplx> sample(const UniformGrid& g, const std::function<cplx(double)>& f) {
  std::vector<cplx> v(g.size);
  for (std::size_t k = 0; k < g.size; ++k) v[k] = f(g.at(k));
  return v;
}

// Exact -G_ω applied to e^{μ s} on [t0, T] with zero beyond T: the sweep's convention.
cplx exact_exp(cplx omega, cplx mu, double t, double t0, double T) {
  if (omega.real() < 0) return (std::exp(mu * t) - std::exp(omega * (t - t0) + mu * t0)) / (mu - omega);
  return std::exp(mu * t) * (1.0 - std::exp((mu - omega) * (T - t))) / (mu - omega);
}

}  // namespace

TEST(Kernel, Examples) {
  EXPECT_DOUBLE_EQ(kernel(1.0, 0.0, 1.0).real(), -std::exp(-1.0));
  EXPECT_DOUBLE_EQ(kernel(-1.0, 1.0, 0.0).real(), std::exp(-1.0));
  EXPECT_EQ(kernel(1.0, 1.0, 0.0), cplx(0.0));
  EXPECT_EQ(kernel(-1.0, 0.0, 1.0), cplx(0.0));
  EXPECT_THROW(kernel(cplx(0.0, 2.0), 0.0, 1.0), PreconditionError);
}

TEST(Kernel, TailBound) {
  const auto one = [](double) { return 1.0; };
  const double T1 = tail_bound(1.0, 0.0, one, 1e-12, 0.01);
  EXPECT_NEAR(T1, -std::log(1e-12), 0.02);
  const double T2 = tail_bound(2.0, 0.0, one, 1e-12, 0.01);
  EXPECT_NEAR(T2, (-std::log(1e-12) - std::log(2.0)) / 2.0, 0.02);
  EXPECT_DOUBLE_EQ(tail_bound(1.0, 3.0, [](double) { return 0.0; }, 1e-12, 0.01), 3.0);
  EXPECT_DOUBLE_EQ(tail_bound(-1.0, 3.0, one, 1e-12, 0.01), 3.0);
  EXPECT_THROW(tail_bound(1e-3, 0.0, one, 1e-12, 0.5), NumericError);
}

TEST(Quadrature, GaussRulesIntegratePolynomials) {
  for (int order : {4, 8, 12}) {
    const GaussRule& g = gauss_legendre(order);
    for (int p = 0; p < 2 * order; ++p) {
      double s = 0;
      for (int k = 0; k < order; ++k) s += g.weights[k] * std::pow(g.nodes[k], p);
      EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-14) << order << " " << p;
    }
  }
}

TEST(Quadrature, CumulativeAndDerivative) {
  const UniformGrid g = UniformGrid::covering(0.0, 4.0, 0.02);
  const auto f = sample(g, [](double t) { return std::cos(t); });
  const auto F = cumulative_integral(g, f);
  const auto d = differentiate(g, f);
  for (std::size_t k = 0; k < g.size; ++k) {
    EXPECT_NEAR(F[k].real(), std::sin(g.at(k)), 1e-8);
    EXPECT_NEAR(d[k].real(), -std::sin(g.at(k)), 1e-6);
  }
  EXPECT_NEAR(interpolate_cubic(g, f, 1.234).real(), std::cos(1.234), 1e-8);
}

TEST(Sweep, ClosedFormExponential) {
  const UniformGrid g = UniformGrid::covering(1.0, 21.0, 0.025);
  const cplx mu(-0.3, 0.7);
  const auto f = sample(g, [&](double t) { return std::exp(mu * t); });
  for (cplx omega : {cplx(-1.0, 0.5), cplx(2.0, -1.0), cplx(0.4, 3.0), cplx(-3.0, 0.0)}) {
    const auto G = GreenSweep(omega, g).apply(f);
    double worst = 0;
    for (std::size_t k = 0; k < g.size; ++k)
      worst = std::max(worst, std::abs(G[k] - exact_exp(omega, mu, g.at(k), g.t0, g.back())));
    EXPECT_LE(worst, 1e-8) << omega;
  }
}

TEST(Sweep, SolvesFirstOrderEquation) {
  const UniformGrid g = UniformGrid::covering(0.0, 30.0, 0.02);
  const auto f = sample(g, [](double t) { return cplx(std::sin(t) / (1 + t), 1 / (2 + t * t)); });
  for (cplx omega : {cplx(-1.5, 0.3), cplx(1.0, 2.0)}) {
    const auto G = GreenSweep(omega, g).apply(f);
    const auto dG = differentiate(g, G);
    for (std::size_t k = 10; k + 10 < g.size; ++k) EXPECT_LE(std::abs(dG[k] - omega * G[k] - f[k]), 1e-6);
  }
}

TEST(Sweep, AbsDominatesAndIsBounded) {
  const UniformGrid g = UniformGrid::covering(0.0, 20.0, 0.05);
  const auto f = sample(g, [](double t) { return cplx(std::cos(3 * t), std::sin(t)) / (1.0 + t); });
  std::vector<double> absf(g.size), ones(g.size, 1.0);
  for (std::size_t k = 0; k < g.size; ++k) absf[k] = std::abs(f[k]);
  for (cplx omega : {cplx(-0.5, 1.0), cplx(0.8, -2.0)}) {
    const GreenSweep s(omega, g);
    const auto G = s.apply(f);
    const auto I = s.apply_abs(absf);
    const auto I1 = s.apply_abs(ones);
    for (std::size_t k = 0; k < g.size; ++k) {
      EXPECT_LE(std::abs(G[k]), I[k] * (1 + 1e-9) + 1e-12);
      EXPECT_LE(I1[k], 1.0 / std::abs(omega.real()) + 1e-9);
      EXPECT_GE(I[k], 0.0);
    }
  }
}

TEST(Scalar, MatchesSweepAndClosedForm) {
  const QuadConfig q;
  const cplx mu(-0.5, 0.0);
  const ScalarFn f = [&](double s) { return std::exp(mu * s); };
  const EnvelopeFn env = [&](double s) { return std::exp(mu.real() * s); };
  for (cplx omega : {cplx(-1.0, 0.0), cplx(1.5, 1.0)}) {
    for (double t : {0.5, 2.0, 7.0}) {
      const GreenValue v = scalar_green(omega, f, t, 0.0, q, env);
      const cplx expect = omega.real() < 0 ? exact_exp(omega, mu, t, 0.0, 0.0)
                                           : std::exp(mu * t) / (mu - omega);
      EXPECT_LE(std::abs(v.value - expect), 1e-10) << omega << " " << t;
      EXPECT_FALSE(v.truncated);
      EXPECT_GE(scalar_abs(omega, f, t, 0.0, q, env).value.real(), std::abs(v.value) * (1 - 1e-12));
    }
  }
}

TEST(Composite, SumOfScalarOperators) {
  const SpectralData s = spectral_from_shifts(0.0, {1.0, -1.0, 2.0, -2.0});
  const QuadConfig q;
  const ScalarFn f = [](double t) { return cplx(1.0 / (1.0 + t * t)); };
  const EnvelopeFn env = [](double t) { return 1.0 / (1.0 + t * t); };
  const double t = 3.0;
  cplx sum = 0.0;
  for (std::size_t j = 0; j < s.gamma.size(); ++j)
    sum += scalar_green(s.gamma[j], f, t, 0.0, q, env).value / s.Gamma[j];
  EXPECT_LE(std::abs(composite_green(s, f, t, 0.0, 0, q, env) - sum), 1e-12);
  // derivatives by central differences; order n-1 carries the boundary term
  const double h = 1e-3;
  for (int i = 1; i <= 4; ++i) {
    const cplx fd = (composite_green(s, f, t + h, 0.0, i - 1, q, env) -
                     composite_green(s, f, t - h, 0.0, i - 1, q, env)) / (2 * h);
    EXPECT_LE(std::abs(composite_green(s, f, t, 0.0, i, q, env) - fd), 1e-5) << i;
  }
}

TEST(QuadConfig, Validation) {
  QuadConfig q;
  q.panel_order = 2;
  try {
    q.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "quad.panel_order");
  }
}
