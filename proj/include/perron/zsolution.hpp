#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "perron/quadrature.hpp"

namespace perron {

/// Green-represented function z = -Σ_j w_j / Γ_j with w_j = G_{γ_j}[h], sampled on a grid.
/// derivs[i][k] = z^{(i)}(t_k) for i = 0..n-2; top[k] = z^{(n-1)}(t_k) = -Σ γ_j^{n-1} w_j/Γ_j - h(t_k).
struct GreenStack {
  UniformGrid grid;
  std::vector<std::vector<cplx>> components;  ///< w_j, one row per shift
  std::vector<cplx> integrand;                ///< h
  std::vector<std::vector<cplx>> derivs;
  std::vector<cplx> top;

  std::size_t size() const { return grid.size; }
  int order() const { return static_cast<int>(derivs.size()) + 1; }
  /// z, z', ..., z^{(n-2)} at node k.
  std::vector<cplx> stack(std::size_t k) const;
  /// Σ_i |z^{(i)}(t_k)|, i <= n-2.
  double norm_at(std::size_t k) const;
};

/// Fixed point of z = -G[P + L(z) + F(Z)] on a working grid.
struct ZSolution : GreenStack {
  std::size_t report_size = 0;         ///< nodes inside [t0, t_end]; the rest is tail padding
  int iterations = 0;
  bool converged = false;
  double final_update = 0.0;           ///< last sup-norm update
  double final_residual = 0.0;         ///< sup_k Σ_i |z - (-G[h(z)])|^{(i)}
  std::vector<double> update_history;
  double measured_ratio = 0.0;         ///< max successive update ratio
  std::vector<double> envelope;        ///< (I_β + I_{-β})[P](t_k)
};

}  // namespace perron
