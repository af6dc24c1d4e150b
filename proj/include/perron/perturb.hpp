#pragma once

#include <complex>
#include <span>
#include <vector>

#include "perron/charpoly.hpp"
#include "perron/expr.hpp"
#include "perron/green.hpp"

namespace perron {

/// y^{(n)} + Σ_{i<n} (a_i + r_i(t)) y^{(i)} = 0 on [t0, ∞).
struct PerturbedODE {
  std::vector<cplx> a;      ///< a_0..a_{n-1}
  std::vector<Expr> r;      ///< r_0..r_{n-1}; empty Expr means 0
  double t0 = 0.0;

  int order() const { return static_cast<int>(a.size()); }
  CharPoly charpoly() const { return CharPoly(a); }
  /// r_0(t)..r_{n-1}(t)
  std::vector<cplx> r_at(double t) const;
  bool unperturbed() const;
};

/// r_i together with the chosen root λ.
class PerturbationBundle {
 public:
  PerturbationBundle() = default;
  PerturbationBundle(std::vector<Expr> r, cplx lambda);

  int order() const { return static_cast<int>(r_.size()); }
  cplx lambda() const { return lambda_; }
  const std::vector<Expr>& expressions() const { return r_; }

  std::vector<cplx> evaluate(double t) const;
  /// (1/k!) ∂^k P(r;λ) at t; zero for k = n.
  cplx p_r_lambda(int k, double t) const;

  /// Same quantity from already-evaluated r values.
  static cplx p_r_lambda(std::span<const cplx> r, cplx lambda, int k);

 private:
  std::vector<Expr> r_;
  cplx lambda_{};
};

struct SmallnessDiagnostics {
  std::vector<double> t;
  std::vector<double> r_star;   ///< ∫_t^{t+1} |r|
  std::vector<double> r_bar;    ///< sup_{t<=s<=H} ∫_t^s |r| / (1+s-t)
  std::vector<double> i_gamma;  ///< I_γ[r](t)
  double horizon = 0.0;         ///< H, the finite sup horizon used for r_bar
};

/// Smallness integrals on a uniform grid.  The r_bar supremum is taken over grid nodes up to
/// the grid end; the window for r_star may run one unit past the grid.
SmallnessDiagnostics smallness_diagnostics(const Expr& r, cplx gamma, const UniformGrid& grid,
                                           const QuadConfig& q);

}  // namespace perron
