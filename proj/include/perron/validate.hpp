#pragma once

#include <vector>

#include "perron/asympt.hpp"
#include "perron/perturb.hpp"
#include "perron/quadrature.hpp"

namespace perron {

/// Numerical solution on a uniform grid.  The true state is exp(log_scale[k]) * state[k];
/// state[k][i] approximates y^{(i)}(t_k) up to that scale.
struct Trajectory {
  UniformGrid grid;
  std::vector<std::vector<cplx>> state;
  std::vector<double> log_scale;
  int rk_order = 5;
  double max_error_estimate = 0.0;  ///< largest embedded local error estimate (relative)
  cplx root{};                      ///< asymptotic root, for fundamental-system members
};

/// Fixed-step Dormand-Prince 5(4) on the companion system from y0 = (y, y', ..., y^{(n-1)}).
/// The state is renormalised whenever its norm leaves [1e-50, 1e50].
Trajectory reference_integrate(const PerturbedODE& ode, std::span<const cplx> y0, double t_end, double step);

/// One trajectory per root, in the order given.  Built by propagating an orthonormal frame
/// (seeded with the Vandermonde columns, most dominant root first) with the same RK pair and
/// re-orthonormalising by QR after every step; the solution attached to the j-th most dominant
/// root is recovered by back-substitution through the leading j×j triangular factors starting
/// at t_end + pad.  Stable for sub-dominant roots, unlike forward shooting.
std::vector<Trajectory> fundamental_system(const PerturbedODE& ode, std::span<const cplx> roots, double t_end,
                                           double step, double pad = 30.0);

struct LogDerivativeProfile {
  std::vector<cplx> values;           ///< y^{(i)}/y; NaN where y vanishes
  std::vector<std::size_t> gaps;      ///< indices where y was (numerically) zero
};

LogDerivativeProfile log_derivative_profile(const Trajectory& traj, int i);

struct WronskianCheck {
  std::vector<double> t;
  std::vector<cplx> ratio;           ///< W / Π y_i
  cplx vandermonde{};                ///< Π_{i<k} (λ_k - λ_i) in trajectory order
  std::vector<double> log_abs_w;     ///< log|W(t)| including stored scales
  double max_rel_deviation = 0.0;    ///< max |ratio/V - 1| over t >= t_min
};

WronskianCheck wronskian_check(std::span<const Trajectory> trajs, double t_min);

/// Closeness of the Green-represented log-derivative to a reference trajectory and the
/// least-squares constant c in y_num ≈ c·Φ over the last half of the reported grid.
struct ReferenceComparison {
  std::vector<double> t;
  std::vector<cplx> logderiv_error;   ///< y'/y - (λ + z)
  std::vector<cplx> ratio;            ///< y_num / (c Φ)
  cplx c{};
  double tail_max_logderiv_error = 0.0;  ///< over the last half
  double drift = 0.0;                    ///< max |ratio - 1| over the last half
};

ReferenceComparison compare_with_reference(const Trajectory& ref, const ZSolution& z, const AsymptoticReport& phi);

}  // namespace perron
