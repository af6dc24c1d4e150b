#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace perron::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kAcceptanceFailure = 4 };

struct Common {
  std::string config_path;         ///< empty: built-in worked-example config (example5 only)
  std::string json_out;            ///< overrides output.json
  std::string csv_dir;             ///< overrides output.csv_dir
  std::optional<std::uint64_t> seed;
};

int analyze(const Common& c);
int solve(const Common& c);
int formula(const Common& c, const std::string& kind);
int validate(const Common& c, const std::string& kind);
int example5(const Common& c);
int selftest(const Common& c);

/// Built-in configuration text of the worked fifth-order example.
const char* example5_config_text();

}  // namespace perron::cli
