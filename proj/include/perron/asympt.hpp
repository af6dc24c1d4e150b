#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "perron/ladder.hpp"
#include "perron/riccati.hpp"
#include "perron/solver.hpp"

namespace perron {

enum class FormulaKind {
  kGeneral,          ///< G-correction of P and ∫(P+L+F)
  kLevinson,         ///< bare exponential, needs P in L¹
  kHartmanWintner,   ///< G-correction of P and ∫P
  kRefined,          ///< as Hartman-Wintner with a remainder envelope in R(θ), θ = -G[P]
  kRefinedRemainder, ///< R(θ) folded into both the correction and the integral
  kLadder,           ///< exp ∫ Σ θ_l
};

const char* formula_name(FormulaKind k);
FormulaKind formula_from_name(const std::string& name);

/// One multiplicative factor, kept as log-values and log-derivatives on the reported grid.
struct Factor {
  std::string name;
  std::vector<cplx> log_value;
  std::vector<cplx> log_derivative;
};

struct AsymptoticReport {
  FormulaKind kind = FormulaKind::kGeneral;
  cplx lambda{};
  cplx kappa{};
  UniformGrid grid;   ///< reported grid, starting at t0
  std::vector<Factor> factors;
  std::vector<double> envelope;   ///< O(·) argument of the 1 + O(·) error factor
  std::string envelope_text;
  /// log of the neglected exact piece: Σ factors + remainder_log = λ(t - t0) + ∫ z (general kind only).
  std::vector<cplx> remainder_log;
  std::map<std::string, bool> applicability;
  std::map<std::string, double> diagnostics;
};

struct FormulaValue {
  cplx y{};
  cplx log_y{};
  cplx log_derivative{};
  double envelope = 0.0;
};

AsymptoticReport assemble_general(const RiccatiSystem& sys, const SpectralData& s, const ZSolution& z,
                                  int quad_order = 8);
AsymptoticReport assemble_levinson(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                   int quad_order = 8);
AsymptoticReport assemble_hw(const RiccatiSystem& sys, const SpectralData& s, const ZSolution& z,
                             int quad_order = 8);
/// `remainder_mode` selects kRefinedRemainder; `z` (optional) sharpens the envelope through u = z - θ.
AsymptoticReport assemble_refined(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                  bool remainder_mode, const ZSolution* z = nullptr, int quad_order = 8);
AsymptoticReport assemble_ladder(const RiccatiSystem& sys, const ThetaLadder& ladder, const WorkingGrid& wg);

/// y and y'/y at t within the reported grid (cubic interpolation of the log factors).
FormulaValue eval_formula(const AsymptoticReport& rep, double t);

nlohmann::json to_json(const AsymptoticReport& rep, std::size_t max_samples = 201);

}  // namespace perron
