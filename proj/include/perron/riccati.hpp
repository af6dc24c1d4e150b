#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "perron/bellpoly.hpp"
#include "perron/green.hpp"
#include "perron/perturb.hpp"
#include "perron/zsolution.hpp"

namespace perron {

/// One monomial of F over (z, z', ..., z^{(n-2)}) with coefficient c + Σ_i ρ_i r_i(t).
struct FTerm {
  Exponents exps;
  cplx constant{};
  std::vector<cplx> r_coeff;
  int degree = 0;
};

/// D z + P(r;λ) + L(t,z) + F(t,Z) = 0 for z = y'/y - λ.
struct RiccatiSystem {
  int order = 0;
  cplx lambda{};
  std::vector<cplx> a;       ///< a_0..a_n (a_n = 1)
  std::vector<cplx> d;       ///< d[m] multiplies z^{(m)}, m = 0..n-1
  PerturbationBundle bundle;
  std::vector<FTerm> f_terms;
  /// If set, replaces P(r;λ) (manufactured-solution tests).
  ScalarFn forcing_override;

  /// ã_i = Σ_{j=0}^{n-i} C(i+j, j) a_{i+j} λ^j
  cplx tilde_a(int i) const;
  /// r̃_i = Σ_{j=0}^{n-1-i} C(i+j, j) r_{i+j} λ^j
  cplx tilde_r(int i, std::span<const cplx> r) const;

  cplx forcing(std::span<const cplx> r, double t) const;
  /// Σ_{k=1}^{n-1} (1/k!) ∂^k P(r;λ) z^{(k-1)}; Z holds z..z^{(n-2)}.
  cplx eval_L(std::span<const cplx> r, std::span<const cplx> Z) const;
  cplx eval_F(std::span<const cplx> r, std::span<const cplx> Z) const;
  /// Σ_m d_m z^{(m)} with Zfull = z..z^{(n-1)}.
  cplx eval_D(std::span<const cplx> Zfull) const;
};

/// Throws PreconditionError unless λ is a root of the unperturbed polynomial.
RiccatiSystem build_riccati(const PerturbedODE& ode, cplx lambda);

/// F(t, Z) with r evaluated at t.
cplx eval_F(const RiccatiSystem& sys, double t, std::span<const cplx> Z);

/// Dz + P + L + F at grid node k, with z^{(n-1)} taken from the stack's top row.
cplx riccati_residual(const RiccatiSystem& sys, const GreenStack& z, std::size_t k);
/// Same at time t, which must coincide with a grid node.
cplx riccati_residual(const RiccatiSystem& sys, const GreenStack& z, double t);

std::string to_string(const RiccatiSystem& sys);

/// r_i sampled on a grid, plus P(r;λ) and the L coefficients.
struct SystemSamples {
  std::vector<std::vector<cplx>> r;   ///< r[k][i]
  std::vector<cplx> P;                ///< forcing at node k
  std::vector<std::vector<cplx>> Lc;  ///< Lc[k][m] multiplies z^{(m)}, m = 0..n-2
};

SystemSamples sample_system(const RiccatiSystem& sys, const UniformGrid& grid);

}  // namespace perron
