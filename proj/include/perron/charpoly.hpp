#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "perron/bellpoly.hpp"

namespace perron {

/// Monic characteristic polynomial x^n + a_{n-1}x^{n-1} + ... + a_0, n >= 2.
class CharPoly {
 public:
  /// `lower` holds a_0..a_{n-1}.
  explicit CharPoly(std::vector<cplx> lower);
  static CharPoly from_roots(std::span<const cplx> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// a_0..a_n with a_n = 1.
  const std::vector<cplx>& coefficients() const { return coeffs_; }
  cplx operator()(cplx x) const;
  bool has_real_coefficients() const;

 private:
  std::vector<cplx> coeffs_;
};

/// (1/j!) P^{(j)}(λ) = Σ_{i>=j} a_i C(i,j) λ^{i-j}.
cplx poly_derivative_at(const CharPoly& p, cplx lambda, int j);

/// Coefficients d_1..d_n of the linear operator D (entry m-1 multiplies z^{(m-1)}).
std::vector<cplx> derivative_operator_coefficients(const CharPoly& p, cplx lambda);

struct RootOptions {
  double tol = 1e-12;
  int max_iter = 800;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Simultaneous (Aberth) iteration with Newton polish, sorted by (Re, Im).
/// Throws NumericError carrying per-root residuals if it cannot converge.
std::vector<cplx> find_roots(const CharPoly& p, const RootOptions& opts = {});

/// Largest |P(root)| / scale over the given roots; scale = Σ|a_i||root|^i.
double root_residual(const CharPoly& p, std::span<const cplx> roots);

struct SpectralData {
  std::vector<cplx> roots;
  cplx lambda{};
  std::size_t lambda_index = 0;
  std::vector<cplx> gamma;         ///< λ_j - λ over j != lambda_index, in root order
  std::vector<double> alpha;       ///< Re γ_j
  std::vector<cplx> Gamma;         ///< Π_{k != j} (γ_j - γ_k)
  std::vector<double> alpha_tilde; ///< Σ_{i=0}^{n-2} |γ_j|^i
  double gamma_tilde = 0.0;        ///< Σ_j α̃_j / |Γ_j|
  double beta = 0.0;

  int order() const { return static_cast<int>(gamma.size()) + 1; }
  double min_abs_alpha() const;
  /// (-1)^n Π γ_j^{-1}
  cplx kappa() const;
};

/// Builds the shifted spectrum for λ (must be one of `roots`).  Real parts must be pairwise
/// separated by more than 1e-8(1+max|λ_i|).  β defaults to half the smallest |α_j|.
SpectralData spectral_data(std::span<const cplx> roots, cplx lambda,
                           std::optional<double> beta = std::nullopt);

/// Same construction from explicit shifts γ_j (no root list), keeping the given order.
SpectralData spectral_from_shifts(cplx lambda, std::vector<cplx> gamma,
                                  std::optional<double> beta = std::nullopt);

struct WeightCheck {
  bool ok = false;
  double max_residual = 0.0;
  /// With m = n-1 shifts: residuals[i] = |Σ_j γ_j^i / Γ_j - δ_{i,m-1}| for i = 0..m-1,
  /// then |Σ 1/(Γγ) - κ|.
  std::vector<double> residuals;
};

WeightCheck partial_fraction_weights_check(const SpectralData& s, double tol = 1e-10);

}  // namespace perron
