#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "perron/charpoly.hpp"
#include "perron/error.hpp"

using namespace perron;

namespace {

// Oracle: eigenvalues of the companion matrix.
std::vector<cplx> companion_roots(const CharPoly& p) {
  const int n = p.degree();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -p.coefficients()[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return r;
}

std::vector<cplx> sorted_by_real(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return v;
}

CharPoly example() { return CharPoly({0.0, 4.0, 0.0, -5.0, 0.0}); }

}  // namespace

TEST(CharPoly, DerivativeExamples) {
  const CharPoly p = example();
  for (double l : {-2.0, -1.0, 0.0, 1.0, 2.0}) EXPECT_EQ(poly_derivative_at(p, l, 0), cplx(0.0));
  EXPECT_EQ(poly_derivative_at(p, 0.0, 1), cplx(4.0));
  EXPECT_EQ(poly_derivative_at(p, 0.0, 5), cplx(1.0));
}

// Coefficients of D for n = 5 at generic λ: (5λ + a4), (10λ^2 + 4a4λ + a3), ...
TEST(CharPoly, OperatorCoefficientsFifthOrder) {
  const std::vector<cplx> a = {cplx(0.3), cplx(-1.1), cplx(0.7), cplx(2.0), cplx(-0.4)};
  const CharPoly p(a);
  const cplx l(0.6, -0.2);
  const auto d = derivative_operator_coefficients(p, l);
  ASSERT_EQ(d.size(), 5u);
  EXPECT_LE(std::abs(d[4] - 1.0), 1e-15);
  EXPECT_LE(std::abs(d[3] - (5.0 * l + a[4])), 1e-14);
  EXPECT_LE(std::abs(d[2] - (10.0 * l * l + 4.0 * a[4] * l + a[3])), 1e-14);
}

TEST(CharPoly, RootsOfExample) {
  const auto r = find_roots(example());
  ASSERT_EQ(r.size(), 5u);
  const double expect[] = {-2, -1, 0, 1, 2};
  for (int i = 0; i < 5; ++i) EXPECT_LE(std::abs(r[i] - expect[i]), 1e-12);
  const auto q = find_roots(CharPoly({-1.0, 0.0}));
  EXPECT_LE(std::abs(q[0] + 1.0), 1e-14);
  EXPECT_LE(std::abs(q[1] - 1.0), 1e-14);
}

TEST(CharPoly, RandomRootsAgainstCompanionOracle) {
  std::mt19937_64 g(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<cplx> a(6);
    for (auto& v : a) v = {nd(g), nd(g)};
    const CharPoly p(a);
    const auto got = find_roots(p);
    const auto oracle = companion_roots(p);
    // match greedily; random roots are well separated with probability ~1
    std::vector<bool> used(6, false);
    for (cplx r : got) {
      double best = INFINITY;
      int bi = -1;
      for (int j = 0; j < 6; ++j)
        if (!used[j] && std::abs(r - oracle[j]) < best) best = std::abs(r - oracle[j]), bi = j;
      used[bi] = true;
      EXPECT_LE(best, 1e-8);
    }
    EXPECT_LE(root_residual(p, got), 1e-12);
    // rebuild from roots
    const CharPoly back = CharPoly::from_roots(got);
    for (int i = 0; i <= 6; ++i)
      EXPECT_LE(std::abs(back.coefficients()[i] - p.coefficients()[i]), 1e-8 * (1 + std::abs(p.coefficients()[i])));
  }
}

TEST(CharPoly, RootsSortedAndDeterministic) {
  const CharPoly p = CharPoly::from_roots(std::vector<cplx>{cplx(1, 1), cplx(-2, 0.5), cplx(0.4, -3), cplx(3, 0)});
  const auto a = find_roots(p), b = find_roots(p);
  EXPECT_EQ(a, b);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a[i - 1].real(), a[i].real());
}

TEST(Spectral, ExampleAtZero) {
  const std::vector<cplx> roots = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const SpectralData s = spectral_data(roots, 0.0);
  ASSERT_EQ(s.gamma.size(), 4u);
  const std::vector<double> gamma = {-2, -1, 1, 2};
  std::vector<double> got;
  for (cplx g : s.gamma) got.push_back(g.real());
  EXPECT_EQ(got, gamma);
  for (std::size_t j = 0; j < 4; ++j) {
    if (std::abs(s.gamma[j]) == 2.0) EXPECT_DOUBLE_EQ(s.alpha_tilde[j], 15.0);
    if (std::abs(s.gamma[j]) == 1.0) EXPECT_DOUBLE_EQ(std::abs(s.Gamma[j]), 6.0);
    if (s.gamma[j] == 2.0) EXPECT_DOUBLE_EQ(s.Gamma[j].real(), 12.0);
  }
  EXPECT_DOUBLE_EQ(s.beta, 0.5);
}

TEST(Spectral, KappaAtOne) {
  const std::vector<cplx> roots = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const SpectralData s = spectral_data(roots, 1.0);
  EXPECT_NEAR(s.kappa().real(), 1.0 / 6.0, 1e-15);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < s.gamma.size(); ++j) sum += 1.0 / (s.Gamma[j] * s.gamma[j]);
  EXPECT_LE(std::abs(sum - s.kappa()), 1e-14);
}

TEST(Spectral, Errors) {
  const std::vector<cplx> clash = {cplx(1, 1), cplx(1, -1), cplx(-1, 0)};
  try {
    spectral_data(clash, cplx(-1, 0));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("roots 0 and 1"), std::string::npos) << e.what();
  }
  const std::vector<cplx> roots = {-1.0, 1.0};
  EXPECT_THROW(spectral_data(roots, 0.5), PreconditionError);
  EXPECT_THROW(spectral_data(roots, 1.0, 2.5), PreconditionError);
}

TEST(Weights, HandCase) {
  const SpectralData s = spectral_from_shifts(0.0, {1.0, -1.0, 2.0, -2.0});
  const std::vector<double> G = {-6, 6, 12, -12};
  for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(s.Gamma[j].real(), G[j]);
  const WeightCheck w = partial_fraction_weights_check(s);
  EXPECT_TRUE(w.ok);
  ASSERT_EQ(w.residuals.size(), 5u);
  EXPECT_LE(w.residuals[0], 1e-15);  // -1/6 + 1/6 + 1/12 - 1/12
  EXPECT_LE(w.residuals[3], 1e-15);  // = 1
}

TEST(Weights, SingleShift) {
  const SpectralData s = spectral_from_shifts(0.0, {cplx(-0.7, 0.2)});
  EXPECT_EQ(s.Gamma[0], cplx(1.0));
  EXPECT_TRUE(partial_fraction_weights_check(s).ok);
}

TEST(Weights, RandomSpectra) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 6;
    std::vector<cplx> gamma;
    while (static_cast<int>(gamma.size()) < m) {
      cplx c(u(g), u(g) / 2);
      bool ok = std::abs(c.real()) > 0.2;
      for (cplx q : gamma) ok = ok && std::abs(q.real() - c.real()) > 0.3;
      if (ok) gamma.push_back(c);
    }
    EXPECT_TRUE(partial_fraction_weights_check(spectral_from_shifts(cplx(u(g), u(g)), gamma)).ok);
  }
}

TEST(RootShift, ReducedOperatorRoots) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial % 4;
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) roots.emplace_back(-3.0 + 0.9 * i + 0.2 * u(g), 2 * u(g));
    const CharPoly p = CharPoly::from_roots(roots);
    const cplx l = roots[trial % n];
    auto d = derivative_operator_coefficients(p, l);
    d.pop_back();
    const auto got = sorted_by_real(companion_roots(CharPoly(d)));
    std::vector<cplx> expect;
    for (cplx r : roots)
      if (r != l) expect.push_back(r - l);
    expect = sorted_by_real(expect);
    for (int i = 0; i < n - 1; ++i) EXPECT_LE(std::abs(got[i] - expect[i]), 1e-8);
  }
}
