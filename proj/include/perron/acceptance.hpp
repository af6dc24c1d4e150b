#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace perron {

inline constexpr int kAcceptanceCount = 10;
inline constexpr std::uint64_t kAcceptanceSeed = 20240917;

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;   ///< one line with the decisive numbers
  nlohmann::json details;
  double seconds = 0.0;
};

/// Runs acceptance criterion `id` (1..10).  Exceptions inside a check turn into a failure.
CheckResult run_check(int id, std::uint64_t seed = kAcceptanceSeed);
std::vector<CheckResult> run_acceptance(std::uint64_t seed = kAcceptanceSeed);

/// "PASS [ 7] name: summary"
std::string format_line(const CheckResult& r);

}  // namespace perron
