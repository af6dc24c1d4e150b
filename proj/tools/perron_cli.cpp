#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "perron/error.hpp"
#include "perron/log.hpp"

int main(int argc, char** argv) {
  using namespace perron;
  CLI::App app{"Asymptotic integration of perturbed constant-coefficient linear ODEs"};
  app.set_version_flag("--version", PERRON_VERSION);
  app.require_subcommand(1);

  cli::Common common;
  std::string kind = "refined_remainder";
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("-c,--config", common.config_path, "run configuration file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--json", common.json_out, "write the JSON report here instead of stdout");
    sub->add_option("--csv-dir", common.csv_dir, "directory for CSV output");
    sub->add_option("--seed", seed, "override the configured seed")->each([&](const std::string&) {
      common.seed = seed;
    });
  };

  auto* analyze = app.add_subcommand("analyze", "roots, shifted spectrum and contraction constants");
  add_common(analyze, true);
  auto* solve = app.add_subcommand("solve", "Picard solution z and its derivatives");
  add_common(solve, true);
  auto* formula = app.add_subcommand("formula", "asymptotic formula report");
  add_common(formula, true);
  const std::vector<std::string> kinds = {"general", "levinson", "hartman_wintner", "refined", "refined_remainder",
                                         "ladder"};
  formula->add_option("-k,--kind", kind, "asymptotic formula")->check(CLI::IsMember(kinds));
  auto* validate = app.add_subcommand("validate", "compare against reference trajectories");
  add_common(validate, true);
  validate->add_option("-k,--kind", kind, "formula used for the fitted ratio")->check(CLI::IsMember(kinds));
  auto* example5 = app.add_subcommand("example5", "worked fifth-order example");
  add_common(example5, false);
  auto* selftest = app.add_subcommand("selftest", "acceptance and property suites");
  selftest->add_option("-o,--json", common.json_out, "write the JSON report here instead of stdout");
  selftest->add_option("--seed", seed, "random seed")->each([&](const std::string&) { common.seed = seed; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  const char* stage = "run";
  try {
    if (*analyze) {
      stage = "analyze";
      return cli::analyze(common);
    }
    if (*solve) {
      stage = "solve";
      return cli::solve(common);
    }
    if (*formula) {
      stage = "formula";
      return cli::formula(common, kind);
    }
    if (*validate) {
      stage = "validate";
      return cli::validate(common, kind);
    }
    if (*example5) {
      stage = "example5";
      return cli::example5(common);
    }
    if (*selftest) {
      stage = "selftest";
      return cli::selftest(common);
    }
  } catch (const ConfigError& e) {
    log::write(log::Level::kError, std::string("config error: ") + e.what());
    return cli::kConfigError;
  } catch (const ParseError& e) {
    log::write(log::Level::kError, std::string("config error: ") + e.what());
    return cli::kConfigError;
  } catch (const Error& e) {
    log::write(log::Level::kError, std::string("stage ") + stage + " failed: " + e.what());
    return cli::kNumericError;
  } catch (const std::exception& e) {
    log::write(log::Level::kError, std::string("stage ") + stage + " failed: " + e.what());
    return cli::kNumericError;
  }
  return cli::kOk;
}
