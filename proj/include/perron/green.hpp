#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "perron/charpoly.hpp"
#include "perron/quadrature.hpp"

namespace perron {

struct QuadConfig {
  int panel_order = 8;        ///< Gauss-Legendre points per panel, >= 4
  double panel_width = 0.5;   ///< panel length for function-valued quadrature
  double tail_tol = 1e-12;    ///< truncation tolerance for ∫_t^∞ tails
  double max_interval = 400;  ///< hard cap on any truncated tail length

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

using ScalarFn = std::function<cplx(double)>;
using EnvelopeFn = std::function<double(double)>;

/// Samples on a uniform grid with cubic interpolation inside and an optional envelope
/// (|f| bound) beyond the last node.
struct GridFunction {
  UniformGrid grid;
  std::vector<cplx> values;
  EnvelopeFn envelope;

  cplx operator()(double t) const;
};

/// g_ω(t, s) = -sgn(Re ω) e^{ω(t-s)} when sgn(Re ω)(t-s) < 0, else 0.  Re ω = 0 is rejected.
cplx kernel(cplx omega, double t, double s);

struct GreenValue {
  cplx value{};
  double tail_estimate = 0.0;  ///< bound on the neglected part of the tail
  bool truncated = false;      ///< true if max_interval was hit before tail_tol
};

/// G_ω[f](t).  Re ω < 0 integrates over [t0, t]; Re ω > 0 over [t, T_cut] from tail_bound.
/// Without an envelope the tail is bounded by max|f| over the last panel examined.
GreenValue scalar_green(cplx omega, const ScalarFn& f, double t, double t0, const QuadConfig& q,
                        const EnvelopeFn& envelope = {});

/// I_ω[f](t) = ∫ |g_ω(t,s) f(s)| ds (depends only on Re ω).
GreenValue scalar_abs(cplx omega, const ScalarFn& f, double t, double t0, const QuadConfig& q,
                      const EnvelopeFn& envelope = {});

/// Smallest T = t + k·step with e^{-Re ω (T-t)} envelope(T) / Re ω < tol (Re ω > 0).
/// Returns t when Re ω < 0.  Throws NumericError if T would exceed t + max_interval.
double tail_bound(cplx omega, double t, const EnvelopeFn& envelope, double tol, double step,
                  double max_interval = 400.0);

/// i-th derivative of the composite operator G[f] = Σ_j G_{γ_j}[f] / Γ_j at t.
/// For i = n-1 the value includes the boundary term f(t).
cplx composite_green(const SpectralData& s, const ScalarFn& f, double t, double t0, int i,
                     const QuadConfig& q, const EnvelopeFn& envelope = {});

/// Grid version of G_ω: one O(N) sweep over node values with exact exponential factors.
/// The integrand beyond the last node is taken to be zero.
class GreenSweep {
 public:
  GreenSweep(cplx omega, const UniformGrid& grid, int quad_order = 8);

  cplx omega() const { return omega_; }
  std::vector<cplx> apply(std::span<const cplx> f) const;
  /// I_ω on non-negative samples |f|.
  std::vector<double> apply_abs(std::span<const double> absf) const;

 private:
  cplx omega_;
  UniformGrid grid_;
  cplx decay_;          // e^{-ωh} (backward) or e^{ωh} (forward)
  CellWeights w_;
  double decay_abs_;
  CellWeights w_abs_;
};

}  // namespace perron
