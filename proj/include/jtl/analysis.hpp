#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "jtl/solver.hpp"

namespace jtl {

enum class Window { kRectangular, kHann };

// One-sided power spectral density (V^2/Hz for a voltage input) with the
// dominant peak and its full width at half maximum.
struct SpectrumResult {
  Eigen::VectorXd freqs;
  Eigen::VectorXd psd;
  double f0 = 0.0;
  double fwhm = 0.0;
  bool has_peak = false;
};

/// Zero-padded (8x by default) periodogram of a uniformly sampled series.
/// psd integrates over frequency to the mean power of the record, so
/// sum(psd) * df * N * dt equals the time-domain energy sum(x^2) * dt.
/// Requires at least 256 samples.
SpectrumResult psd(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt,
                   Window window = Window::kRectangular, int zero_pad = 8);

/// Same, but checks that `times` is a uniform grid first.
SpectrumResult psd(const Eigen::Ref<const Eigen::VectorXd>& times,
                   const Eigen::Ref<const Eigen::VectorXd>& signal,
                   Window window = Window::kRectangular, int zero_pad = 8);

struct EnergySpectrum {
  Eigen::VectorXd freqs;
  Eigen::VectorXd density;  // one-sided, per Hz (V^2 s / Hz for volts)
  double df = 0.0;
};

EnergySpectrum energy_spectrum(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt,
                               int zero_pad = 8);

/// Power waves a^2, b^2 for voltage v and current i flowing into the port
/// with reference impedance z0.
struct PowerWaves {
  Eigen::VectorXd forward;
  Eigen::VectorXd backward;
};

PowerWaves power_waves(const Eigen::Ref<const Eigen::VectorXd>& v,
                       const Eigen::Ref<const Eigen::VectorXd>& i, double z0);

/// Trapezoidal integral on a uniform grid.
double integrate(const Eigen::Ref<const Eigen::VectorXd>& series, double dt);

// Voltage and current at a port, current positive into the element the port
// feeds (the lattice at the input, the load at the output).
struct PortRecord {
  Eigen::VectorXd v;
  Eigen::VectorXd i;
  double z0 = 0.0;
};

PortRecord input_port(const Trajectory& traj);
PortRecord output_port(const Trajectory& traj);

/// Load forward-wave energy over source forward-wave energy. Throws
/// DomainError when nothing was injected.
double efficiency(const PortRecord& input, const PortRecord& output, double dt);

/// Load forward-wave energy inside [f0 - fwhm/2, f0 + fwhm/2] divided by
/// `duration`, in dBm.
double band_power_dbm(const PortRecord& output, double dt, double f0, double fwhm,
                      double duration);

struct PowerReport {
  double e_in_fwd = 0.0;   // J
  double e_in_bwd = 0.0;   // J
  double e_out_fwd = 0.0;  // J
  double eta = 0.0;
  double avg_input_power = 0.0;  // W over the sequence duration
  double band_power_dbm = 0.0;
};

PowerReport power_report(const Trajectory& traj, const SpectrumResult& load_spectrum,
                         double sequence_duration);

struct BreatherFit {
  double f_osc = 0.0;       // Hz
  double decay_time = 0.0;  // s
  double fit_residual = 0.0;
  int peaks = 0;
};

/// Peaks of `signal` from its largest maximum onwards, down to 10% of that
/// maximum, fitted as A exp(-t / tau) with spacing 1 / f_osc. Throws
/// NumericsError with fewer than four peaks.
BreatherFit breather_fit(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt,
                         double t0 = 0.0);

/// Fit of node voltage `cell` from t_start onwards.
BreatherFit breather_fit(const Trajectory& traj, int cell, double t_start);

// Where the injected forward energy went.
struct EnergyAudit {
  double injected = 0.0;
  double reflected = 0.0;
  double transmitted = 0.0;
  double dissipated = 0.0;
  double stored_change = 0.0;

  /// |injected - (reflected + transmitted + dissipated + stored_change)| / injected
  double closure_error() const;
};

EnergyAudit energy_audit(const Trajectory& traj);

void to_json(nlohmann::json& j, const SpectrumResult& s);  // peak summary only
void to_json(nlohmann::json& j, const PowerReport& p);
void to_json(nlohmann::json& j, const BreatherFit& f);

}  // namespace jtl
