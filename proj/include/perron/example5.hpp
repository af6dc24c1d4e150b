#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "perron/asympt.hpp"
#include "perron/solver.hpp"
#include "perron/validate.hpp"

namespace perron {

/// y^{(5)} + (t^{-2/3} - 5) y''' + (4 + (t^2+1)^{-1/3}) y' + (t^2+1)^{-1/3} y = 0.
PerturbedODE example5_ode(double t0 = 10.0);

struct Example5Options {
  double t0 = 10.0;
  double t_end = 50.0;
  double step = 0.02;
  cplx lambda = 1.0;
  QuadConfig quad;
  PicardOptions picard;
  double reference_pad = 30.0;
  double wronskian_t_min = 20.0;
};

struct Example5Report {
  std::vector<std::string> header;
  std::vector<cplx> roots;
  SpectralData spectral;
  ContractionReport contraction;
  ZSolution z;
  AsymptoticReport phi;          ///< refined formula with the remainder folded in
  ReferenceComparison comparison;
  WronskianCheck wronskian;
  double reference_error_estimate = 0.0;

  bool bound_defined = false;    ///< K < 1/2, so N = 1/(1-2K) exists
  double bound_N = 1.0;          ///< N when defined, else 1 (the infimum of 1/(1-2K))
  bool bound_holds = false;      ///< ‖Z(t)‖ <= γ̃ bound_N (I_β + I_{-β})[P](t) on the reported grid
  double bound_max_ratio = 0.0;  ///< max_t ‖Z(t)‖ / (γ̃ (I_β + I_{-β})[P](t)), i.e. the N it needs
  double seconds = 0.0;

  nlohmann::json to_json() const;
};

Example5Report example5_harness(const Example5Options& opts = {});

}  // namespace perron
