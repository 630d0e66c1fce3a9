// jtlsim: derive circuit parameters, run canned scenarios, validate configs.
//
// Exit codes: 0 success, 2 configuration or validation error,
// 3 runtime or numerical failure.

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "jtl/experiments.hpp"
#include "jtl/io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Args {
  std::string config;
  std::string out = "out";
  int jobs = 0;
  std::optional<double> dt_divisor;
  std::optional<std::string> scenario;
};

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

int cmd_derive(const Args& args) {
  const jtlsim::Config cfg = jtlsim::load_config(args.config);
  const jtl::CircuitParams circuit = jtlsim::circuit_from(cfg);
  for (const auto& w : circuit.warnings()) std::cerr << "warning: " << w << "\n";
  std::cout << jtlsim::describe(circuit);
  return 0;
}

int cmd_validate(const Args& args) {
  const jtlsim::Config cfg = jtlsim::load_config(args.config);
  if (!cfg.circuit.empty()) {
    const jtl::CircuitParams circuit = jtlsim::circuit_from(cfg);
    for (const auto& w : circuit.warnings()) std::cerr << "warning: " << w << "\n";
  }
  jtlsim::options_from(cfg, args.dt_divisor, 1);
  if (args.scenario || cfg.scenario.count("id")) {
    const jtl::ScenarioSpec spec = jtlsim::scenario_from(cfg, args.scenario, args.out);
    const auto known = jtl::known_overrides(spec.id);
    for (const auto& [key, value] : spec.overrides) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw jtl::ValidationError("scenario " + jtl::to_string(spec.id) +
                                   " does not accept parameter '" + key + "'");
      }
    }
  }
  std::cout << "config ok\n";
  return 0;
}

int cmd_run(const Args& args) {
  const jtlsim::Config cfg =
      args.config.empty() ? jtlsim::Config{} : jtlsim::load_config(args.config);
  const jtl::ScenarioSpec spec = jtlsim::scenario_from(cfg, args.scenario, args.out);
  const jtl::RunOptions options =
      jtlsim::options_from(cfg, args.dt_divisor, args.jobs > 0 ? args.jobs : default_jobs());
  jtl::RunOptions run_options = options;
  run_options.keep_trajectories = true;
  const jtl::ScenarioReport report = jtl::run_scenario(spec, run_options);
  jtl::write_report(spec.output_dir, report);
  for (const auto& line : jtl::summary_lines(report)) std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Josephson transmission line pulse-train simulator"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", args.config, "INI config file");
    if (config_required) opt->required();
    sub->add_option("--dt-divisor", args.dt_divisor, "steps per plasma period (default 200)");
    sub->add_option("--scenario", args.scenario, "scenario id");
  };
  auto* derive = app.add_subcommand("derive", "print derived circuit parameters");
  add_common(derive, true);
  auto* run = app.add_subcommand("run", "run a scenario and write CSV/JSON output");
  add_common(run, false);
  run->add_option("--out", args.out, "output directory")->capture_default_str();
  run->add_option("--jobs", args.jobs, "parallel runs (default: available processors)");
  auto* validate = app.add_subcommand("validate", "check a config without running");
  add_common(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*derive) return cmd_derive(args);
    if (*validate) return cmd_validate(args);
    return cmd_run(args);
  } catch (const jtl::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const jtl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
