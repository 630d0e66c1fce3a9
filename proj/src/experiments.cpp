#include "jtl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "jtl/io.hpp"

namespace jtl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxExtensions = 20;
constexpr double kResidualFraction = 1e-3;

// Runs task(i) for i in [0, count) on up to `jobs` threads. Results are
// written by index, so ordering never depends on scheduling. The exception
// of the lowest failing index is rethrown.
template <typename Task>
void parallel_for(size_t count, int jobs, Task&& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t threads = std::min(count, static_cast<size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Re-raises the active library error with the run's resolved config appended.
[[noreturn]] void rethrow_with_config(const nlohmann::json& config) {
  const std::string suffix = "\n  while running config: " + config.dump();
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(e.what() + suffix);
  } catch (const DomainError& e) {
    throw DomainError(e.what() + suffix);
  } catch (const NumericsError& e) {
    throw NumericsError(e.what() + suffix);
  }
}

nlohmann::json circuit_json(const CircuitParams& c) {
  return {{"i_c", c.i_c},     {"c_j", c.c_j},   {"l", c.l},         {"r_n", c.r_n},
          {"r_sub", c.r_sub}, {"n_jtl", c.n_jtl}, {"z_in", c.z_in}, {"z_out", c.z_out}};
}

nlohmann::json derived_json(const DerivedParams& d) {
  return {{"l_j", d.l_j},         {"lambda_j", d.lambda_j}, {"omega_p", d.omega_p},
          {"c_bar", d.c_bar},     {"z_jtl", d.z_jtl},       {"beta_c", d.beta_c},
          {"alpha_in", d.alpha_in}, {"alpha_out", d.alpha_out}, {"tau_lr", d.tau_lr},
          {"e_j", d.e_j},         {"e_0", d.e_0}};
}

nlohmann::json protocol_json(const TrainProtocol& p) {
  return {{"kind", to_string(p.kind)},
          {"lambda_j", p.lambda_j},
          {"n_jtl", p.n_jtl},
          {"alpha_in", p.alpha_in},
          {"alpha_out", p.alpha_out},
          {"spacing_multiple", p.spacing_multiple},
          {"envelope_peak", p.envelope_peak},
          {"envelope_sigma", p.envelope_sigma},
          {"pulse_fwhm", p.pulse_fwhm},
          {"r_n", p.r_n},
          {"r_sub", p.r_sub}};
}

nlohmann::json options_json(const RunOptions& o) {
  return {{"dt_divisor", o.dt_divisor}, {"fixed_t_end", o.fixed_t_end}};
}

// Simulates to t_end, then keeps going in blocks of 20 plasma periods until
// the lattice holds less than 0.1% of the injected energy.
Trajectory simulate_with_horizon(const CircuitParams& circuit, const PulseTrain& train,
                                 double t_end, double dt, double period,
                                 const RunOptions& options) {
  Trajectory traj = simulate(circuit, train, t_end, dt);
  if (options.fixed_t_end > 0.0) return traj;
  const DriveSpec drive{pulse_waveform(train), {}};
  for (int ext = 0; ext < kMaxExtensions; ++ext) {
    const PortRecord in = input_port(traj);
    const double injected = integrate(power_waves(in.v, in.i, in.z0).forward, dt);
    const LatticeState<double> last = traj.state_at(traj.samples() - 1);
    if (stored_energy(last, traj.model) <= kResidualFraction * injected) break;
    traj.append(simulate(traj.model, drive, last, last.t + 20.0 * period, dt));
  }
  return traj;
}

double final_phase(const Trajectory& traj) {
  return traj.phi(traj.cells() - 1, traj.samples() - 1);
}

RunRecord finish(RunRecord rec, Trajectory&& traj, const RunOptions& options) {
  rec.t_end = traj.times[traj.samples() - 1];
  rec.final_phase_out = final_phase(traj);
  rec.config["solver"]["t_end"] = rec.t_end;
  if (options.keep_trajectories) {
    rec.trajectory = std::make_shared<const Trajectory>(std::move(traj));
  }
  return rec;
}

bool within_rel(double value, double target, double tol) {
  return std::abs(value - target) <= tol * std::abs(target);
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSingleFluxon: return "single_fluxon";
    case ScenarioId::kAlphaSweep: return "alpha_sweep";
    case ScenarioId::kGaussian: return "gaussian";
    case ScenarioId::kFlatTop: return "flat_top";
    case ScenarioId::kBandwidthSweep: return "bandwidth_sweep";
    case ScenarioId::kEfficiencyMap: return "efficiency_map";
    case ScenarioId::kTable1: return "table1";
  }
  return "unknown";
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "single_fluxon", "alpha_sweep", "gaussian", "flat_top",
      "bandwidth_sweep", "efficiency_map", "table1"};
  return names;
}

ScenarioId parse_scenario(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ScenarioId::kTable1); ++i) {
    const auto id = static_cast<ScenarioId>(i);
    if (to_string(id) == name) return id;
  }
  std::string msg = "unknown scenario '" + std::string(name) + "'; valid ids:";
  for (const auto& n : scenario_names()) msg += " " + n;
  throw ValidationError(msg);
}

std::string to_string(Protocol p) {
  return p == Protocol::kFlatTop ? "flat_top" : "gaussian";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "flat_top") return Protocol::kFlatTop;
  if (name == "gaussian") return Protocol::kGaussian;
  throw ValidationError("unknown protocol '" + std::string(name) +
                        "'; valid: flat_top gaussian");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kAntifluxonReflection: return "antifluxon_reflection";
    case Regime::kBreather: return "breather";
    case Regime::kAbsorption: return "absorption";
  }
  return "unknown";
}

int jtl_length_for(double lambda_j) {
  const int n = static_cast<int>(std::lround(1.66 * lambda_j));
  return std::clamp(n, 4, 5);
}

TrainProtocol flat_top_protocol() {
  TrainProtocol p;
  p.kind = Protocol::kFlatTop;
  p.lambda_j = 3.17;
  p.n_jtl = jtl_length_for(p.lambda_j);
  return p;
}

TrainProtocol gaussian_protocol() {
  TrainProtocol p;
  p.kind = Protocol::kGaussian;
  p.lambda_j = 2.50;
  p.n_jtl = 4;
  return p;
}

TrainProtocol bandwidth_protocol() {
  TrainProtocol p = flat_top_protocol();
  p.pulse_fwhm = 30.71e-12;
  p.spacing_multiple = 1;
  return p;
}

ScenarioReport run_single_fluxon(const std::vector<double>& alpha_out,
                                 const SingleFluxonSetup& setup, const RunOptions& options) {
  if (alpha_out.empty()) throw ValidationError("alpha_out grid must not be empty");
  for (double a : alpha_out) {
    if (!(a > 0.05 && a < 1.0 + 1e-12)) {
      throw ValidationError("alpha_out values must lie in (0.05, 1.0]");
    }
  }
  ScenarioReport report;
  report.id = ScenarioId::kSingleFluxon;
  report.runs.resize(alpha_out.size());

  parallel_for(alpha_out.size(), options.jobs, [&](size_t idx) {
    RunRecord rec;
    rec.label = "single_fluxon[" + std::to_string(idx) + "]";
    rec.config = {{"kind", "single_fluxon"},
                  {"setup",
                   {{"i_c", setup.i_c},
                    {"omega_p", setup.omega_p},
                    {"lambda_j", setup.lambda_j},
                    {"n_jtl", setup.n_jtl},
                    {"alpha_in", setup.alpha_in},
                    {"alpha_out", alpha_out[idx]},
                    {"v_tilde", setup.v_tilde},
                    {"r_n", setup.r_n},
                    {"r_sub", setup.r_sub}}},
                  {"options", options_json(options)}};
    try {
      CircuitTargets targets;
      targets.i_c = setup.i_c;
      targets.omega_p = setup.omega_p;
      targets.lambda_j = setup.lambda_j;
      targets.n_jtl = setup.n_jtl > 0 ? setup.n_jtl
                                      : static_cast<int>(std::lround(4.0 * setup.lambda_j));
      targets.alpha_in = setup.alpha_in;
      targets.alpha_out = alpha_out[idx];
      targets.r_n = setup.r_n;
      targets.r_sub = setup.r_sub;
      rec.circuit = design_circuit(targets);
      rec.derived = derive(rec.circuit);
      rec.config["circuit"] = circuit_json(rec.circuit);

      const double tau = sech_time_constant(single_fluxon_width(rec.derived, setup.v_tilde));
      const Pulse fluxon = sech_pulse(kFluxQuantum, tau, 5.0 * tau);
      rec.drive.pulses = {fluxon};
      rec.drive.duration = fluxon.t_center + 5.0 * tau;
      rec.drive.balanced = false;
      rec.drive.overlapping = false;

      const double dt = default_time_step(rec.derived, options.dt_divisor);
      const double period = kTwoPi / rec.derived.omega_p;
      const double t_end =
          options.fixed_t_end > 0.0 ? options.fixed_t_end : rec.drive.duration + 60.0 * period;
      rec.config["drive"] = {{"sech_tau", tau}, {"t_center", fluxon.t_center}};
      rec.config["solver"] = {{"dt", dt}};

      Trajectory traj =
          simulate_with_horizon(rec.circuit, rec.drive, t_end, dt, period, options);
      rec.spectrum = psd(traj.v_node_out(), dt);
      rec.power = power_report(traj, rec.spectrum, rec.drive.duration);
      try {
        rec.fit = breather_fit(traj, traj.cells() - 1, fluxon.t_center + 5.0 * tau);
      } catch (const NumericsError& e) {
        rec.fit_note = e.what();
      }
      const long windings = std::lround(final_phase(traj) / kTwoPi);
      if (windings != 1) {
        rec.regime = Regime::kAntifluxonReflection;
      } else {
        rec.regime = rec.fit ? Regime::kBreather : Regime::kAbsorption;
      }
      report.runs[idx] = finish(std::move(rec), std::move(traj), options);
    } catch (...) {
      rethrow_with_config(rec.config);
    }
  });

  report.provenance = {{"scenario", "single_fluxon"}, {"options", options_json(options)}};
  report.provenance["alpha_out"] = alpha_out;
  return report;
}

RunRecord run_train(double i_c, double omega_p, int n_pairs, const TrainProtocol& protocol,
                    const RunOptions& options) {
  RunRecord rec;
  rec.label = to_string(protocol.kind);
  rec.config = {{"kind", "train"},
                {"i_c", i_c},
                {"omega_p", omega_p},
                {"n_pairs", n_pairs},
                {"protocol", protocol_json(protocol)},
                {"options", options_json(options)}};
  try {
    if (n_pairs < 1) throw ValidationError("n_pairs must be at least 1");
    CircuitTargets targets;
    targets.i_c = i_c;
    targets.omega_p = omega_p;
    targets.lambda_j = protocol.lambda_j;
    targets.n_jtl = protocol.n_jtl;
    targets.alpha_in = protocol.alpha_in;
    targets.alpha_out = protocol.alpha_out;
    targets.r_n = protocol.r_n;
    targets.r_sub = protocol.r_sub;
    rec.circuit = design_circuit(targets);
    rec.derived = derive(rec.circuit);
    rec.config["circuit"] = circuit_json(rec.circuit);

    const double fwhm = protocol.pulse_fwhm > 0.0 ? protocol.pulse_fwhm
                                                  : train_pulse_width(rec.derived);
    const double tau = sech_time_constant(fwhm);
    const double spacing = schedule_spacing(rec.derived, protocol.spacing_multiple);
    const int half_cycles = 2 * n_pairs - 1;
    const PhaseEnvelope envelope =
        protocol.kind == Protocol::kFlatTop
            ? PhaseEnvelope::flat_top(half_cycles)
            : PhaseEnvelope::gaussian(half_cycles, protocol.envelope_peak,
                                      protocol.envelope_sigma);
    rec.drive = compile_envelope(envelope, spacing, tau, 5.0 * tau);

    const double dt = default_time_step(rec.derived, options.dt_divisor);
    const double period = kTwoPi / rec.derived.omega_p;
    const double t_end =
        options.fixed_t_end > 0.0 ? options.fixed_t_end : rec.drive.duration + 20.0 * period;
    rec.config["drive"] = {{"pulse_fwhm", fwhm},
                           {"sech_tau", tau},
                           {"spacing", spacing},
                           {"half_cycles", half_cycles},
                           {"pulses", rec.drive.pulses.size()},
                           {"sequence_duration", rec.drive.duration}};
    rec.config["solver"] = {{"dt", dt}};

    Trajectory traj = simulate_with_horizon(rec.circuit, rec.drive, t_end, dt, period, options);
    rec.spectrum = psd(traj.v_node_out(), dt);
    rec.power = power_report(traj, rec.spectrum, rec.drive.duration);
    return finish(std::move(rec), std::move(traj), options);
  } catch (...) {
    rethrow_with_config(rec.config);
  }
}

namespace {

ScenarioReport single_train_report(ScenarioId id, double i_c, double omega_p, int n_pairs,
                                   const TrainProtocol& protocol, const RunOptions& options) {
  ScenarioReport report;
  report.id = id;
  report.runs.push_back(run_train(i_c, omega_p, n_pairs, protocol, options));
  report.runs.back().label = to_string(id) + "[0]";
  report.provenance = {{"scenario", to_string(id)},
                       {"i_c", i_c},
                       {"omega_p", omega_p},
                       {"n_pairs", n_pairs},
                       {"protocol", protocol_json(protocol)},
                       {"options", options_json(options)}};
  return report;
}

}  // namespace

ScenarioReport run_flat_top(double i_c, double omega_p, int n_pairs,
                            const TrainProtocol& protocol, const RunOptions& options) {
  TrainProtocol p = protocol;
  p.kind = Protocol::kFlatTop;
  return single_train_report(ScenarioId::kFlatTop, i_c, omega_p, n_pairs, p, options);
}

ScenarioReport run_gaussian(double i_c, double omega_p, int n_pairs,
                            const TrainProtocol& protocol, const RunOptions& options) {
  TrainProtocol p = protocol;
  p.kind = Protocol::kGaussian;
  return single_train_report(ScenarioId::kGaussian, i_c, omega_p, n_pairs, p, options);
}

ScenarioReport run_bandwidth_sweep(const std::vector<int>& n_pairs_list,
                                   const TrainProtocol& protocol, const RunOptions& options) {
  if (n_pairs_list.empty()) throw ValidationError("n_pairs list must not be empty");
  if (!std::is_sorted(n_pairs_list.begin(), n_pairs_list.end())) {
    throw ValidationError("n_pairs list must be ascending");
  }
  ScenarioReport report;
  report.id = ScenarioId::kBandwidthSweep;
  report.runs.resize(n_pairs_list.size());
  parallel_for(n_pairs_list.size(), options.jobs, [&](size_t idx) {
    report.runs[idx] =
        run_train(kBandwidthIc, kBandwidthOmegaP, n_pairs_list[idx], protocol, options);
    report.runs[idx].label = "bandwidth_sweep[" + std::to_string(idx) + "]";
  });
  report.provenance = {{"scenario", "bandwidth_sweep"},
                       {"i_c", kBandwidthIc},
                       {"omega_p", kBandwidthOmegaP},
                       {"n_pairs", n_pairs_list},
                       {"protocol", protocol_json(protocol)},
                       {"options", options_json(options)}};
  return report;
}

ScenarioReport run_efficiency_map(const std::vector<double>& i_c_grid,
                                  const std::vector<double>& omega_p_grid, Protocol protocol,
                                  const RunOptions& options) {
  if (i_c_grid.empty() || omega_p_grid.empty()) {
    throw ValidationError("efficiency map grids must not be empty");
  }
  const TrainProtocol proto =
      protocol == Protocol::kFlatTop ? flat_top_protocol() : gaussian_protocol();
  const int n_pairs = protocol == Protocol::kFlatTop ? 50 : 41;
  const size_t rows = i_c_grid.size();
  const size_t cols = omega_p_grid.size();

  ScenarioReport report;
  report.id = ScenarioId::kEfficiencyMap;
  report.runs.resize(rows * cols);
  parallel_for(rows * cols, options.jobs, [&](size_t idx) {
    const size_t r = idx / cols;
    const size_t c = idx % cols;
    report.runs[idx] = run_train(i_c_grid[r], omega_p_grid[c], n_pairs, proto, options);
    report.runs[idx].label = "efficiency_map[" + std::to_string(r) + "," + std::to_string(c) + "]";
  });
  report.eta_map.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t idx = 0; idx < rows * cols; ++idx) {
    report.eta_map(static_cast<Eigen::Index>(idx / cols), static_cast<Eigen::Index>(idx % cols)) =
        report.runs[idx].power->eta;
  }
  report.provenance = {{"scenario", "efficiency_map"},
                       {"protocol", protocol_json(proto)},
                       {"n_pairs", n_pairs},
                       {"i_c_grid", i_c_grid},
                       {"omega_p_grid", omega_p_grid},
                       {"options", options_json(options)}};
  return report;
}

namespace {

struct TableRow {
  Protocol kind;
  double i_c;
  double c_j;
  double f0;
  double fwhm;
  double p_in;
  double dbm;
};

const std::vector<TableRow>& table_rows() {
  static const std::vector<TableRow> rows = {
      {Protocol::kFlatTop, 3e-6, 800e-15, 16.991e9, 418e6, 1.860e-9, -77.213},
      {Protocol::kFlatTop, 4e-6, 800e-15, 19.609e9, 482e6, 3.893e-9, -74.472},
      {Protocol::kFlatTop, 5e-6, 800e-15, 21.918e9, 536e6, 6.475e-9, -73.056},
      {Protocol::kFlatTop, 6e-6, 800e-15, 24.018e9, 582e6, 10.135e-9, -71.448},
      {Protocol::kGaussian, 3e-6, 1000e-15, 15.191e9, 836e6, 36.207e-9, -65.446},
      {Protocol::kGaussian, 4e-6, 1000e-15, 17.536e9, 964e6, 56.605e-9, -63.957},
      {Protocol::kGaussian, 5e-6, 1000e-15, 19.609e9, 1073e6, 72.096e-9, -63.308},
      {Protocol::kGaussian, 6e-6, 1000e-15, 21.482e9, 1164e6, 97.012e-9, -62.402},
  };
  return rows;
}

}  // namespace

ScenarioReport run_table1(const RunOptions& options) {
  const auto& rows = table_rows();
  ScenarioReport report;
  report.id = ScenarioId::kTable1;
  report.runs.resize(rows.size());
  report.table.resize(rows.size());
  parallel_for(rows.size(), options.jobs, [&](size_t idx) {
    const TableRow& row = rows[idx];
    const double omega_p = 1.0 / std::sqrt(josephson_inductance(row.i_c) * row.c_j);
    const bool flat = row.kind == Protocol::kFlatTop;
    const TrainProtocol proto = flat ? flat_top_protocol() : gaussian_protocol();
    RunRecord rec = run_train(row.i_c, omega_p, flat ? 50 : 41, proto, options);
    rec.label = "table1[" + std::to_string(idx) + "]";

    TableRowCheck check;
    check.application = to_string(row.kind);
    check.i_c = row.i_c;
    check.f0_target = row.f0;
    check.fwhm_target = row.fwhm;
    check.p_in_target = row.p_in;
    check.dbm_target = row.dbm;
    check.f0 = rec.spectrum.f0;
    check.fwhm = rec.spectrum.fwhm;
    check.p_in = rec.power->avg_input_power;
    check.dbm = rec.power->band_power_dbm;
    check.f0_ok = rec.spectrum.has_peak && within_rel(check.f0, row.f0, 0.05);
    check.fwhm_ok = rec.spectrum.has_peak && within_rel(check.fwhm, row.fwhm, 0.40);
    check.p_in_ok = within_rel(check.p_in, row.p_in, 0.25);
    check.dbm_ok = std::abs(check.dbm - row.dbm) <= 6.0;
    report.table[idx] = check;
    report.runs[idx] = std::move(rec);
  });
  report.provenance = {{"scenario", "table1"}, {"options", options_json(options)}};
  return report;
}

// ---------------------------------------------------------------------------
// Override resolution

namespace {

using Overrides = std::map<std::string, std::string>;

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used == 0 || used != text.size()) {
    throw ValidationError("override '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError("override '" + key + "': expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ValidationError("override '" + key + "': empty list item");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ValidationError("override '" + key + "': list must not be empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(key, text)) {
    if (v != std::floor(v)) throw ValidationError("override '" + key + "': expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void get(const Overrides& o, const char* key, double& dst) {
  if (auto it = o.find(key); it != o.end()) dst = parse_double(key, it->second);
}

void get(const Overrides& o, const char* key, int& dst) {
  if (auto it = o.find(key); it != o.end()) dst = parse_int(key, it->second);
}

const std::vector<std::string> kTrainKeys = {
    "i_c",          "omega_p",     "n_pairs",        "lambda_j",       "n_jtl",
    "alpha_in",     "alpha_out",   "spacing_multiple", "envelope_peak", "envelope_sigma",
    "pulse_fwhm",   "r_n",         "r_sub"};

void apply_protocol(const Overrides& o, TrainProtocol& p) {
  get(o, "lambda_j", p.lambda_j);
  get(o, "n_jtl", p.n_jtl);
  get(o, "alpha_in", p.alpha_in);
  get(o, "alpha_out", p.alpha_out);
  get(o, "spacing_multiple", p.spacing_multiple);
  get(o, "envelope_peak", p.envelope_peak);
  get(o, "envelope_sigma", p.envelope_sigma);
  get(o, "pulse_fwhm", p.pulse_fwhm);
  get(o, "r_n", p.r_n);
  get(o, "r_sub", p.r_sub);
}

// Table I row 2 (flat-top) and row 6 (Gaussian) are the default circuits.
double table_omega(double i_c, double c_j) {
  return 1.0 / std::sqrt(josephson_inductance(i_c) * c_j);
}

}  // namespace

std::vector<std::string> known_overrides(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSingleFluxon:
    case ScenarioId::kAlphaSweep:
      return {"alpha_out", "i_c", "omega_p", "lambda_j", "n_jtl",
              "alpha_in",  "v_tilde", "r_n", "r_sub"};
    case ScenarioId::kFlatTop:
    case ScenarioId::kGaussian:
      return kTrainKeys;
    case ScenarioId::kBandwidthSweep:
      return {"n_pairs",       "lambda_j",       "n_jtl",      "alpha_in", "alpha_out",
              "spacing_multiple", "pulse_fwhm", "r_n", "r_sub"};
    case ScenarioId::kEfficiencyMap:
      return {"i_c", "omega_p", "protocol"};
    case ScenarioId::kTable1:
      return {};
  }
  return {};
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
  const auto known = known_overrides(spec.id);
  for (const auto& [key, value] : spec.overrides) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      std::string msg = "scenario " + to_string(spec.id) + " does not accept parameter '" +
                        key + "'; accepted:";
      for (const auto& k : known) msg += " " + k;
      if (known.empty()) msg += " (none)";
      throw ValidationError(msg);
    }
  }
  const Overrides& o = spec.overrides;

  ScenarioReport report;
  switch (spec.id) {
    case ScenarioId::kSingleFluxon:
    case ScenarioId::kAlphaSweep: {
      SingleFluxonSetup setup;
      std::vector<double> alphas = {0.2};
      if (spec.id == ScenarioId::kAlphaSweep) {
        setup.omega_p = kTwoPi * 15e9;
        alphas = {0.075, 0.15, 0.2, 0.25, 0.3, 0.35};
      }
      if (auto it = o.find("alpha_out"); it != o.end()) alphas = parse_list("alpha_out", it->second);
      get(o, "i_c", setup.i_c);
      get(o, "omega_p", setup.omega_p);
      get(o, "lambda_j", setup.lambda_j);
      get(o, "n_jtl", setup.n_jtl);
      get(o, "alpha_in", setup.alpha_in);
      get(o, "v_tilde", setup.v_tilde);
      get(o, "r_n", setup.r_n);
      get(o, "r_sub", setup.r_sub);
      report = run_single_fluxon(alphas, setup, options);
      break;
    }
    case ScenarioId::kFlatTop:
    case ScenarioId::kGaussian: {
      const bool flat = spec.id == ScenarioId::kFlatTop;
      TrainProtocol p = flat ? flat_top_protocol() : gaussian_protocol();
      double i_c = 4e-6;
      double omega_p = table_omega(i_c, flat ? 800e-15 : 1000e-15);
      int n_pairs = flat ? 50 : 41;
      get(o, "i_c", i_c);
      get(o, "omega_p", omega_p);
      get(o, "n_pairs", n_pairs);
      apply_protocol(o, p);
      report = flat ? run_flat_top(i_c, omega_p, n_pairs, p, options)
                    : run_gaussian(i_c, omega_p, n_pairs, p, options);
      break;
    }
    case ScenarioId::kBandwidthSweep: {
      TrainProtocol p = bandwidth_protocol();
      std::vector<int> pairs = {50, 100, 200, 500};
      if (auto it = o.find("n_pairs"); it != o.end()) pairs = parse_int_list("n_pairs", it->second);
      apply_protocol(o, p);
      report = run_bandwidth_sweep(pairs, p, options);
      break;
    }
    case ScenarioId::kEfficiencyMap: {
      std::vector<double> ic = {1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 6e-6};
      std::vector<double> wp;
      for (double f : {5e9, 10e9, 15e9, 20e9, 25e9}) wp.push_back(kTwoPi * f);
      Protocol proto = Protocol::kFlatTop;
      if (auto it = o.find("i_c"); it != o.end()) ic = parse_list("i_c", it->second);
      if (auto it = o.find("omega_p"); it != o.end()) wp = parse_list("omega_p", it->second);
      if (auto it = o.find("protocol"); it != o.end()) proto = parse_protocol(it->second);
      report = run_efficiency_map(ic, wp, proto, options);
      break;
    }
    case ScenarioId::kTable1:
      report = run_table1(options);
      break;
  }
  report.id = spec.id;
  report.provenance["scenario"] = to_string(spec.id);
  report.provenance["overrides"] = spec.overrides;
  return report;
}

// ---------------------------------------------------------------------------
// Reports

nlohmann::json to_json(const RunRecord& run) {
  nlohmann::json j = {{"label", run.label},
                      {"config", run.config},
                      {"derived", derived_json(run.derived)},
                      {"spectrum", run.spectrum},
                      {"t_end", run.t_end},
                      {"final_phase_out", run.final_phase_out}};
  if (run.power) j["power"] = *run.power;
  if (run.fit) j["breather_fit"] = *run.fit;
  if (!run.fit_note.empty()) j["fit_note"] = run.fit_note;
  if (run.regime) j["regime"] = to_string(*run.regime);
  return j;
}

nlohmann::json to_json(const ScenarioReport& report) {
  nlohmann::json j = {{"scenario", to_string(report.id)}, {"provenance", report.provenance}};
  j["runs"] = nlohmann::json::array();
  for (const auto& r : report.runs) j["runs"].push_back(to_json(r));
  if (!report.table.empty()) {
    j["table"] = nlohmann::json::array();
    for (const auto& t : report.table) {
      j["table"].push_back({{"application", t.application},
                            {"i_c", t.i_c},
                            {"f0", {{"target", t.f0_target}, {"value", t.f0}, {"ok", t.f0_ok}}},
                            {"fwhm", {{"target", t.fwhm_target}, {"value", t.fwhm}, {"ok", t.fwhm_ok}}},
                            {"p_in", {{"target", t.p_in_target}, {"value", t.p_in}, {"ok", t.p_in_ok}}},
                            {"band_dbm", {{"target", t.dbm_target}, {"value", t.dbm}, {"ok", t.dbm_ok}}},
                            {"ok", t.ok()}});
    }
  }
  if (report.eta_map.size() > 0) {
    j["eta_map"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < report.eta_map.rows(); ++r) {
      nlohmann::json jr = nlohmann::json::array();
      for (Eigen::Index c = 0; c < report.eta_map.cols(); ++c) jr.push_back(report.eta_map(r, c));
      j["eta_map"].push_back(jr);
    }
  }
  return j;
}

std::vector<std::string> summary_lines(const ScenarioReport& report) {
  std::vector<std::string> lines;
  for (size_t i = 0; i < report.runs.size(); ++i) {
    const RunRecord& r = report.runs[i];
    std::string line = r.label;
    line += " f0_hz=" + (r.spectrum.has_peak ? format_sig(r.spectrum.f0) : std::string("nan"));
    line += " fwhm_hz=" + (r.spectrum.has_peak ? format_sig(r.spectrum.fwhm) : std::string("nan"));
    line += " eta=" + (r.power ? format_sig(r.power->eta) : std::string("nan"));
    if (r.power) {
      line += " p_in_w=" + format_sig(r.power->avg_input_power);
      line += " band_dbm=" + format_sig(r.power->band_power_dbm);
    }
    if (r.regime) {
      line += " f_osc_hz=" + (r.fit ? format_sig(r.fit->f_osc) : std::string("nan"));
      line += " regime=" + to_string(*r.regime);
    }
    if (i < report.table.size()) line += report.table[i].ok() ? " table=pass" : " table=fail";
    lines.push_back(line);
  }
  return lines;
}

}  // namespace jtl
