#pragma once

#include <optional>
#include <vector>

#include "perron/charpoly.hpp"
#include "perron/green.hpp"
#include "perron/riccati.hpp"
#include "perron/zsolution.hpp"

namespace perron {

/// Reported grid [t0, t_end] extended by a tail pad so that the Re γ > 0 sweeps see a tail
/// contribution below the quadrature tolerance at t_end.
struct WorkingGrid {
  UniformGrid grid;
  std::size_t report_size = 0;
  double pad = 0.0;
};

WorkingGrid make_working_grid(const SpectralData& s, double t0, double t_end, double step, const QuadConfig& q);

/// One GreenSweep per shift γ_j.
class GreenBank {
 public:
  GreenBank(const SpectralData& s, const UniformGrid& grid, int quad_order);
  /// w_j = G_{γ_j}[h] for every j.
  std::vector<std::vector<cplx>> apply(std::span<const cplx> h) const;
  /// z = -G[h] with its derivative stack (top row includes -h).
  GreenStack solve(std::span<const cplx> h) const;
  const SpectralData& spectral() const { return s_; }
  const UniformGrid& grid() const { return grid_; }

 private:
  SpectralData s_;
  UniformGrid grid_;
  std::vector<GreenSweep> sweeps_;
};

/// Builds the stack of z = -Σ_j w_j/Γ_j from components w and integrand h.
GreenStack stack_from_components(const SpectralData& s, const UniformGrid& grid,
                                 std::vector<std::vector<cplx>> w, std::vector<cplx> h);

struct ContractionReport {
  double beta = 0.0;
  double M = 0.0;             ///< ball radius used for m(M)
  double L0 = 0.0;
  double L_beta = 0.0;
  double Q0 = 0.0;
  double Q_beta = 0.0;
  double m_M = 0.0;           ///< Lipschitz majorant of the f_i on the ball
  double eps0 = 0.0;          ///< m(M) Q_0 + L_0
  double K = 0.0;             ///< m(M) Q_β + L_β
  double N = 0.0;             ///< 1/(1-2K); NaN unless K < 1/2
  double gpr_sup = 0.0;       ///< sup_t Σ_i |G[P]^{(i)}(t)|
  double gpr_tail = 0.0;      ///< same quantity at t_end
  bool cl0_holds = false;     ///< L_0 < 1
  bool cl_holds = false;      ///< L_β < 1/2
  bool ball_holds = false;    ///< gpr_sup <= (1 - eps0) M
  bool contraction_certified = false;  ///< eps0 < 1 and ball_holds
  bool gpr_decays = false;    ///< Σ|G[P]^{(i)}| smaller at t_end than its sup
  std::optional<double> first_admissible_t;  ///< smallest node from which L_0 < 1 on the tail
};

/// m(M) = max_i Σ_terms |c| deg M^{deg-1} over the remainders f_1..f_{n-1}.
double lipschitz_majorant(int order, double M);

/// Constants on the reported part of the working grid.  M defaults to 2 sup Σ|G[P]^{(i)}|.
ContractionReport contraction_constants(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                        const QuadConfig& q, std::optional<double> M = std::nullopt);

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 200;
  int quad_order = 8;
};

/// Iterates z_{k+1} = -G[P + L(z_k) + F(Z_k)] from z_0 = 0 until the sup update is below tol.
/// Throws DivergenceError after three consecutive growing updates and NumericError when
/// max_iter is exhausted.
ZSolution picard_solve(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                       const PicardOptions& opts = {});

}  // namespace perron
