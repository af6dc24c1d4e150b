#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace perron {

using cplx = std::complex<double>;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (>= 1).
const GaussRule& gauss_legendre(int order);

/// Equispaced nodes t0, t0+h, ..., t0+(size-1)h.
struct UniformGrid {
  double t0 = 0.0;
  double step = 0.0;
  std::size_t size = 0;

  double at(std::size_t k) const { return t0 + step * static_cast<double>(k); }
  double back() const { return at(size - 1); }
  /// Grid starting at t0 whose last node is the first one >= t_end (within 1e-9 step).
  static UniformGrid covering(double t0, double t_end, double step);
  std::vector<double> nodes() const;
};

/// Per-cell weights for ∫ over [t_k, t_k + h] of e^{ω·x(u)} times the cubic through 4 nodes.
/// `stencils[p]` belongs to a cell sitting at position p (0, 1 or 2) inside its 4-node stencil.
struct CellWeights {
  std::array<std::array<cplx, 4>, 3> stencils;
};

/// ∫_0^1 h·e^{c·u} ℓ_m(u) du for the Lagrange basis on nodes {-p, 1-p, 2-p, 3-p}.
CellWeights exp_cell_weights(cplx c, double h, int quad_order);

/// First node index of the 4-node stencil used for cell k on a grid of `size` nodes.
std::size_t stencil_start(std::size_t k, std::size_t size);

/// Piecewise-cubic running integral: out[k] = ∫_{t_0}^{t_k} f.
std::vector<cplx> cumulative_integral(const UniformGrid& grid, std::span<const cplx> f);
std::vector<double> cumulative_integral(const UniformGrid& grid, std::span<const double> f);

/// Local cubic interpolation of node values at t (clamped stencil, extrapolates at ends).
cplx interpolate_cubic(const UniformGrid& grid, std::span<const cplx> f, double t);
double interpolate_cubic(const UniformGrid& grid, std::span<const double> f, double t);

/// 5-point central difference (one-sided near the ends) of node values.
std::vector<cplx> differentiate(const UniformGrid& grid, std::span<const cplx> f);

}  // namespace perron
