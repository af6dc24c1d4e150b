#pragma once

#include <vector>

#include "perron/riccati.hpp"
#include "perron/solver.hpp"

namespace perron {

/// Deepest ladder rung either mode will build.
inline constexpr int kMaxLadderDepth = 4;

enum class LadderMode {
  kAuto,      ///< explicit closed recursion for n = 5, graded expansion otherwise
  kGeneric,   ///< graded multilinear expansion of F for any n
  kExplicit5, ///< hand-expanded recursion, n = 5 only
};

/// θ_1..θ_m with θ_l = -G[order-l part of P + L(Σθ) + F(Σθ)], where r counts as order one,
/// an a-coefficient monomial of degree d has order d and an r-coefficient one order d+1.
struct ThetaLadder {
  std::vector<GreenStack> theta;  ///< theta[l-1] = θ_l
  /// psi[i][k] = (z - Σ_{l<=m} θ_l)^{(i)}(t_k); empty without a reference z.
  std::vector<std::vector<cplx>> psi;
  bool explicit_n5 = false;

  int depth() const { return static_cast<int>(theta.size()); }
  /// Σ_l θ_l(t_k), derivative order i.
  cplx sum(std::size_t k, int i = 0) const;
};

ThetaLadder theta_ladder(const RiccatiSystem& sys, const SpectralData& s, const UniformGrid& grid, int m,
                         const GreenStack* z = nullptr, LadderMode mode = LadderMode::kAuto, int quad_order = 8);

/// ∫ |ψ| over the second half of [grid start, grid node `report_size`-1] (trapezoid).
double psi_tail_l1(const ThetaLadder& ladder, const UniformGrid& grid, std::size_t report_size);

}  // namespace perron
