#include "jtl/analysis.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>
#include <Eigen/QR>
#include <unsupported/Eigen/FFT>

namespace jtl {

namespace {

constexpr Eigen::Index kMinSamples = 256;

// Smallest 2^a 3^b 5^c >= n; kissfft is fast on those sizes.
Eigen::Index smooth_size(Eigen::Index n) {
  for (Eigen::Index m = n;; ++m) {
    Eigen::Index r = m;
    for (Eigen::Index p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

// |X_k|^2 dt^2 for k = 0 .. N/2 of the zero-padded series, one-sided.
Eigen::VectorXd one_sided_energy(const Eigen::Ref<const Eigen::VectorXd>& x, double dt,
                                 Eigen::Index padded) {
  std::vector<double> in(static_cast<size_t>(padded), 0.0);
  for (Eigen::Index j = 0; j < x.size(); ++j) in[static_cast<size_t>(j)] = x[j];
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  const Eigen::Index bins = padded / 2 + 1;
  Eigen::VectorXd e(bins);
  for (Eigen::Index k = 0; k < bins; ++k) {
    const double mag = std::abs(out[static_cast<size_t>(k)]) * dt;
    const bool paired = k > 0 && !(padded % 2 == 0 && k == padded / 2);
    e[k] = (paired ? 2.0 : 1.0) * mag * mag;
  }
  return e;
}

Eigen::VectorXd frequency_grid(Eigen::Index bins, Eigen::Index padded, double dt) {
  return Eigen::VectorXd::LinSpaced(bins, 0.0, static_cast<double>(bins - 1)) /
         (static_cast<double>(padded) * dt);
}

void locate_peak(SpectrumResult& s) {
  const Eigen::Index bins = s.psd.size();
  if (bins < 3) return;
  Eigen::Index k = 1;
  s.psd.tail(bins - 1).maxCoeff(&k);
  k += 1;
  if (!(s.psd[k] > 0.0) || !(s.psd[k] > s.psd[k - 1])) return;
  s.has_peak = true;
  s.f0 = s.freqs[k];
  const double half = 0.5 * s.psd[k];
  auto crossing = [&](Eigen::Index inside, Eigen::Index outside) {
    const double a = s.psd[inside];
    const double b = s.psd[outside];
    return s.freqs[inside] + (half - a) / (b - a) * (s.freqs[outside] - s.freqs[inside]);
  };
  Eigen::Index j = k;
  while (j > 0 && s.psd[j] > half) --j;
  const double left = s.psd[j] > half ? s.freqs[0] : crossing(j + 1, j);
  j = k;
  while (j < bins - 1 && s.psd[j] > half) ++j;
  const double right = s.psd[j] > half ? s.freqs[bins - 1] : crossing(j - 1, j);
  s.fwhm = right - left;
}

}  // namespace

SpectrumResult psd(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt, Window window,
                   int zero_pad) {
  const Eigen::Index n = signal.size();
  if (n < kMinSamples) throw ValidationError("spectrum needs at least 256 samples");
  if (!(dt > 0.0)) throw ValidationError("sample step must be positive");
  if (zero_pad < 1) throw ValidationError("zero padding factor must be >= 1");

  Eigen::VectorXd x = signal;
  double window_power = 1.0;
  if (window == Window::kHann) {
    const Eigen::ArrayXd w =
        0.5 * (1.0 - (Eigen::ArrayXd::LinSpaced(n, 0.0, 2.0 * std::numbers::pi)).cos());
    x = (x.array() * w).matrix();
    window_power = w.square().mean();
  }
  const Eigen::Index padded = smooth_size(static_cast<Eigen::Index>(zero_pad) * n);
  const double record = static_cast<double>(n) * dt;

  SpectrumResult s;
  s.psd = one_sided_energy(x, dt, padded) / (record * window_power);
  s.freqs = frequency_grid(s.psd.size(), padded, dt);
  locate_peak(s);
  return s;
}

SpectrumResult psd(const Eigen::Ref<const Eigen::VectorXd>& times,
                   const Eigen::Ref<const Eigen::VectorXd>& signal, Window window,
                   int zero_pad) {
  if (times.size() != signal.size()) throw ValidationError("time grid and signal differ in length");
  if (times.size() < 2) throw ValidationError("spectrum needs at least 256 samples");
  const double dt = (times[times.size() - 1] - times[0]) / static_cast<double>(times.size() - 1);
  for (Eigen::Index j = 1; j < times.size(); ++j) {
    if (std::abs(times[j] - times[j - 1] - dt) > 1e-6 * dt) {
      throw ValidationError("time grid is not uniform");
    }
  }
  return psd(signal, dt, window, zero_pad);
}

EnergySpectrum energy_spectrum(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt,
                               int zero_pad) {
  if (signal.size() < 2) throw ValidationError("energy spectrum needs samples");
  const Eigen::Index padded = smooth_size(static_cast<Eigen::Index>(zero_pad) * signal.size());
  EnergySpectrum s;
  s.df = 1.0 / (static_cast<double>(padded) * dt);
  // |X|^2 dt^2 is energy per Hz once multiplied by df; keep it as a density.
  s.density = one_sided_energy(signal, dt, padded);
  s.freqs = frequency_grid(s.density.size(), padded, dt);
  return s;
}

PowerWaves power_waves(const Eigen::Ref<const Eigen::VectorXd>& v,
                       const Eigen::Ref<const Eigen::VectorXd>& i, double z0) {
  if (!(z0 > 0.0)) throw DomainError("reference impedance must be positive");
  if (v.size() != i.size()) throw ValidationError("voltage and current series differ in length");
  const double scale = 1.0 / (2.0 * std::sqrt(z0));
  const Eigen::ArrayXd a = (v.array() + z0 * i.array()) * scale;
  const Eigen::ArrayXd b = (v.array() - z0 * i.array()) * scale;
  return {a.square().matrix(), b.square().matrix()};
}

double integrate(const Eigen::Ref<const Eigen::VectorXd>& series, double dt) {
  const Eigen::Index n = series.size();
  if (n < 2) return 0.0;
  return dt * (series.sum() - 0.5 * (series[0] + series[n - 1]));
}

PortRecord input_port(const Trajectory& traj) {
  return {traj.v_node_in(), traj.i_in, 1.0 / traj.model.g_in};
}

PortRecord output_port(const Trajectory& traj) {
  return {traj.v_node_out(), traj.i_out, 1.0 / traj.model.g_out};
}

double efficiency(const PortRecord& input, const PortRecord& output, double dt) {
  const double e_in = integrate(power_waves(input.v, input.i, input.z0).forward, dt);
  if (!(e_in > 0.0)) throw DomainError("efficiency undefined: no energy was injected");
  const double e_out = integrate(power_waves(output.v, output.i, output.z0).forward, dt);
  return e_out / e_in;
}

double band_power_dbm(const PortRecord& output, double dt, double f0, double fwhm,
                      double duration) {
  if (!(fwhm > 0.0) || !(f0 > 0.0)) throw DomainError("band power needs a spectral peak");
  if (!(duration > 0.0)) throw DomainError("duration must be positive");
  if (!(output.z0 > 0.0)) throw DomainError("reference impedance must be positive");
  const Eigen::VectorXd a =
      (output.v.array() + output.z0 * output.i.array()) / (2.0 * std::sqrt(output.z0));
  const EnergySpectrum es = energy_spectrum(a, dt);
  const double lo = f0 - 0.5 * fwhm;
  const double hi = f0 + 0.5 * fwhm;
  double energy = 0.0;
  for (Eigen::Index k = 0; k < es.freqs.size(); ++k) {
    if (es.freqs[k] >= lo && es.freqs[k] <= hi) energy += es.density[k] * es.df;
  }
  const double power = energy / duration;
  return 10.0 * std::log10(power / 1e-3);
}

PowerReport power_report(const Trajectory& traj, const SpectrumResult& load_spectrum,
                         double sequence_duration) {
  const double dt = traj.dt();
  const PortRecord in = input_port(traj);
  const PortRecord out = output_port(traj);
  const PowerWaves w_in = power_waves(in.v, in.i, in.z0);
  const PowerWaves w_out = power_waves(out.v, out.i, out.z0);
  PowerReport r;
  r.e_in_fwd = integrate(w_in.forward, dt);
  r.e_in_bwd = integrate(w_in.backward, dt);
  r.e_out_fwd = integrate(w_out.forward, dt);
  if (!(r.e_in_fwd > 0.0)) throw DomainError("efficiency undefined: no energy was injected");
  r.eta = r.e_out_fwd / r.e_in_fwd;
  r.avg_input_power = r.e_in_fwd / sequence_duration;
  r.band_power_dbm = load_spectrum.has_peak
                         ? band_power_dbm(out, dt, load_spectrum.f0, load_spectrum.fwhm,
                                          sequence_duration)
                         : -std::numeric_limits<double>::infinity();
  return r;
}

BreatherFit breather_fit(const Eigen::Ref<const Eigen::VectorXd>& signal, double dt, double t0) {
  struct Peak {
    double t;
    double a;
  };
  std::vector<Peak> maxima;
  for (Eigen::Index j = 1; j + 1 < signal.size(); ++j) {
    const double y0 = signal[j - 1];
    const double y1 = signal[j];
    const double y2 = signal[j + 1];
    if (y1 > y0 && y1 >= y2 && y1 > 0.0) {
      // Parabola through the three samples.
      const double curv = y0 - 2.0 * y1 + y2;
      const double shift = curv != 0.0 ? 0.5 * (y0 - y2) / curv : 0.0;
      maxima.push_back({t0 + (static_cast<double>(j) + shift) * dt,
                        y1 - 0.25 * (y0 - y2) * shift});
    }
  }
  size_t start = 0;
  for (size_t p = 1; p < maxima.size(); ++p) {
    if (maxima[p].a > maxima[start].a) start = p;
  }
  std::vector<Peak> used;
  if (!maxima.empty()) {
    const double floor = 0.1 * maxima[start].a;
    for (size_t p = start; p < maxima.size() && maxima[p].a >= floor; ++p) {
      used.push_back(maxima[p]);
    }
  }
  if (used.size() < 4) {
    throw NumericsError("breather fit: insufficient ring-down peaks (" +
                        std::to_string(used.size()) + " found, 4 needed)");
  }

  const auto n = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd log_amp(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    design(p, 0) = 1.0;
    design(p, 1) = used[static_cast<size_t>(p)].t - used.front().t;
    log_amp[p] = std::log(used[static_cast<size_t>(p)].a);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(log_amp);
  if (!(coef[1] < 0.0)) throw NumericsError("breather fit: ring-down envelope does not decay");

  BreatherFit fit;
  fit.peaks = static_cast<int>(n);
  fit.f_osc = static_cast<double>(n - 1) / (used.back().t - used.front().t);
  fit.decay_time = -1.0 / coef[1];
  fit.fit_residual = std::sqrt((design * coef - log_amp).squaredNorm() / static_cast<double>(n));
  return fit;
}

BreatherFit breather_fit(const Trajectory& traj, int cell, double t_start) {
  if (cell < 0 || cell >= traj.cells()) throw ValidationError("cell index out of range");
  Eigen::Index first = 0;
  while (first < traj.samples() && traj.times[first] < t_start) ++first;
  const Eigen::Index count = traj.samples() - first;
  if (count < 3) throw NumericsError("breather fit: no ring-down segment after t_start");
  const Eigen::VectorXd segment = traj.v.row(cell).segment(first, count).transpose();
  return breather_fit(segment, traj.dt(), traj.times[first]);
}

double EnergyAudit::closure_error() const {
  return std::abs(injected - (reflected + transmitted + dissipated + stored_change)) / injected;
}

EnergyAudit energy_audit(const Trajectory& traj) {
  const double dt = traj.dt();
  const PortRecord in = input_port(traj);
  const PortRecord out = output_port(traj);
  const PowerWaves w_in = power_waves(in.v, in.i, in.z0);
  EnergyAudit audit;
  audit.injected = integrate(w_in.forward, dt);
  audit.reflected = integrate(w_in.backward, dt);
  audit.transmitted = integrate((out.v.array() * out.i.array()).matrix(), dt);
  const Eigen::VectorXd joule = traj.model.g_damp * traj.v.array().square().colwise().sum();
  audit.dissipated = integrate(joule, dt);
  audit.stored_change = stored_energy(traj.state_at(traj.samples() - 1), traj.model) -
                        stored_energy(traj.state_at(0), traj.model);
  return audit;
}

void to_json(nlohmann::json& j, const SpectrumResult& s) {
  j = {{"has_peak", s.has_peak}, {"f0_hz", s.f0}, {"fwhm_hz", s.fwhm}};
}

void to_json(nlohmann::json& j, const PowerReport& p) {
  j = {{"e_in_fwd_j", p.e_in_fwd},
       {"e_in_bwd_j", p.e_in_bwd},
       {"e_out_fwd_j", p.e_out_fwd},
       {"eta", p.eta},
       {"avg_input_power_w", p.avg_input_power},
       {"band_power_dbm", p.band_power_dbm}};
}

void to_json(nlohmann::json& j, const BreatherFit& f) {
  j = {{"f_osc_hz", f.f_osc},
       {"decay_time_s", f.decay_time},
       {"fit_residual", f.fit_residual},
       {"peaks", f.peaks}};
}

}  // namespace jtl
