#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perron/green.hpp"
#include "perron/perturb.hpp"
#include "perron/solver.hpp"

namespace perron {

struct LambdaSelector {
  bool by_index = true;
  int index = 0;     ///< into the roots sorted by (Re, Im)
  cplx value{};
};

/// Flat `key = <JSON value>` text; blank lines and `#` comments are ignored.
struct RunConfig {
  int order = 0;
  std::vector<cplx> coefficients;        ///< a_0..a_{n-1}
  std::vector<std::string> perturbations; ///< r_0..r_{n-1} as expressions in t
  double t0 = 0.0;
  double t_end = 0.0;
  double step = 0.02;
  LambdaSelector lambda;
  QuadConfig quad;
  PicardOptions picard;
  std::optional<double> ball_M;
  int ladder_depth = 2;
  std::optional<double> beta;
  std::optional<double> horizon;          ///< r̄ sup horizon; defaults to t_end
  std::uint64_t seed = 1;
  std::string csv_dir;
  std::string json_path;

  /// Canonical form; key order is fixed so the hash is stable.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of the canonical JSON without the output paths, as 16 hex digits.
  std::string hash() const;
  /// Parses the expressions; failures name `perturbations[i]`.
  PerturbedODE ode() const;
  cplx select_lambda(const std::vector<cplx>& sorted_roots) const;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

const char* tool_version();

}  // namespace perron
