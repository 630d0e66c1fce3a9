#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "jtl/analysis.hpp"
#include "jtl/circuit_model.hpp"
#include "jtl/pulse_synth.hpp"
#include "jtl/solver.hpp"

namespace jtl {

enum class ScenarioId {
  kSingleFluxon,
  kAlphaSweep,
  kGaussian,
  kFlatTop,
  kBandwidthSweep,
  kEfficiencyMap,
  kTable1,
};

std::string to_string(ScenarioId id);
/// Throws ValidationError listing the valid ids.
ScenarioId parse_scenario(std::string_view name);
const std::vector<std::string>& scenario_names();

enum class Protocol { kFlatTop, kGaussian };
std::string to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

enum class Regime { kAntifluxonReflection, kBreather, kAbsorption };
std::string to_string(Regime r);

struct RunOptions {
  double dt_divisor = 200.0;  // steps per plasma period
  int jobs = 1;
  bool keep_trajectories = false;
  double fixed_t_end = 0.0;  // > 0 disables the automatic horizon
};

// Geometry and drive settings of a multi-pulse run.
struct TrainProtocol {
  Protocol kind = Protocol::kFlatTop;
  double lambda_j = 3.17;
  int n_jtl = 5;
  double alpha_in = 5.0;
  double alpha_out = 0.25;
  int spacing_multiple = 1;
  double envelope_peak = std::numbers::pi;
  double envelope_sigma = 0.0;  // 0: half-cycles / 6
  double pulse_fwhm = 0.0;      // 0: tau_LR of the circuit
  double r_n = 0.0;             // 0: default_normal_resistance()
  double r_sub = 0.0;           // 0: default_subgap_resistance(i_c)
};

/// round(1.66 lambda_J) clamped to [4, 5].
int jtl_length_for(double lambda_j);

/// 5 cells, lambda_J = 3.17, alpha_Out = 0.25.
TrainProtocol flat_top_protocol();
/// 4 cells, lambda_J = 2.50, alpha_Out = 0.25.
TrainProtocol gaussian_protocol();

struct SingleFluxonSetup {
  double i_c = 4e-6;
  double omega_p = 2.0 * std::numbers::pi * 20e9;
  double lambda_j = 3.3;
  int n_jtl = 0;  // 0: round(4 lambda_J)
  double alpha_in = 5.0;
  double v_tilde = 0.75;
  double r_n = 0.0;
  double r_sub = 0.0;
};

struct RunRecord {
  std::string label;
  nlohmann::json config;  // every parameter needed to reproduce the run
  CircuitParams circuit;
  DerivedParams derived;
  PulseTrain drive;
  SpectrumResult spectrum;  // of the load node voltage
  std::optional<PowerReport> power;
  std::optional<BreatherFit> fit;
  std::optional<Regime> regime;
  std::string fit_note;
  double final_phase_out = 0.0;
  double t_end = 0.0;
  std::shared_ptr<const Trajectory> trajectory;  // only with keep_trajectories
};

// Table I comparison for one row.
struct TableRowCheck {
  std::string application;
  double i_c = 0.0;
  double f0_target = 0.0, f0 = 0.0;
  double fwhm_target = 0.0, fwhm = 0.0;
  double p_in_target = 0.0, p_in = 0.0;
  double dbm_target = 0.0, dbm = 0.0;
  bool f0_ok = false, fwhm_ok = false, p_in_ok = false, dbm_ok = false;
  bool ok() const { return f0_ok && fwhm_ok && p_in_ok && dbm_ok; }
};

struct ScenarioReport {
  ScenarioId id = ScenarioId::kSingleFluxon;
  nlohmann::json provenance;
  std::vector<RunRecord> runs;
  std::vector<TableRowCheck> table;  // table1 only
  Eigen::MatrixXd eta_map;           // efficiency_map only: i_c rows x omega_p cols
};

/// One single-fluxon run per alpha_Out; each gets a spectrum, a ring-down fit
/// (when there is one) and a regime classification.
ScenarioReport run_single_fluxon(const std::vector<double>& alpha_out,
                                 const SingleFluxonSetup& setup = {},
                                 const RunOptions& options = {});

/// A single multi-pulse run of `n_pairs` opposite-polarity pulse pairs.
RunRecord run_train(double i_c, double omega_p, int n_pairs, const TrainProtocol& protocol,
                    const RunOptions& options = {});

ScenarioReport run_flat_top(double i_c, double omega_p, int n_pairs,
                            const TrainProtocol& protocol = flat_top_protocol(),
                            const RunOptions& options = {});
ScenarioReport run_gaussian(double i_c, double omega_p, int n_pairs,
                            const TrainProtocol& protocol = gaussian_protocol(),
                            const RunOptions& options = {});

// Fixed circuit of the bandwidth sweep: 3 uA, lambda_J 3.17, 15 GHz, 5 cells,
// alpha_Out 0.25, 30.71 ps pulses.
TrainProtocol bandwidth_protocol();
inline constexpr double kBandwidthIc = 3e-6;
inline constexpr double kBandwidthOmegaP = 2.0 * std::numbers::pi * 15e9;

ScenarioReport run_bandwidth_sweep(const std::vector<int>& n_pairs_list,
                                   const TrainProtocol& protocol = bandwidth_protocol(),
                                   const RunOptions& options = {});

ScenarioReport run_efficiency_map(const std::vector<double>& i_c_grid,
                                  const std::vector<double>& omega_p_grid, Protocol protocol,
                                  const RunOptions& options = {});

/// All eight rows with per-row pass/fail against the published values.
ScenarioReport run_table1(const RunOptions& options = {});

// Scenario selection with textual overrides (numbers or comma lists).
struct ScenarioSpec {
  ScenarioId id = ScenarioId::kTable1;
  std::map<std::string, std::string> overrides;
  std::filesystem::path output_dir;
};

/// Parameter names a scenario accepts as overrides.
std::vector<std::string> known_overrides(ScenarioId id);

/// Resolves overrides (unknown names throw ValidationError) and runs.
ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

nlohmann::json to_json(const RunRecord& run);
nlohmann::json to_json(const ScenarioReport& report);

/// One summary line per run: label, f0, FWHM, eta (6 significant digits).
std::vector<std::string> summary_lines(const ScenarioReport& report);

}  // namespace jtl
