#include "jtl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace jtl {

LatticeModel LatticeModel::from_circuit(const CircuitParams& circuit) {
  circuit.validate();
  LatticeModel m;
  m.n = circuit.n_jtl;
  m.c_j = circuit.c_j;
  m.l = circuit.l;
  m.i_c = circuit.i_c;
  m.g_damp = 1.0 / circuit.r_sub;
  m.g_in = 1.0 / circuit.z_in;
  m.g_out = 1.0 / circuit.z_out;
  m.boundary = Boundary::kTerminated;
  return m;
}

LatticeState<double> Trajectory::state_at(Eigen::Index sample) const {
  return {phi.col(sample), v.col(sample), times[sample]};
}

void Trajectory::append(const Trajectory& tail) {
  const Eigen::Index keep = samples();
  const Eigen::Index extra = tail.samples() - 1;
  if (extra <= 0) return;
  auto grow_vec = [&](Eigen::VectorXd& dst, const Eigen::VectorXd& src) {
    dst.conservativeResize(keep + extra);
    dst.tail(extra) = src.tail(extra);
  };
  auto grow_mat = [&](Eigen::MatrixXd& dst, const Eigen::MatrixXd& src) {
    dst.conservativeResize(Eigen::NoChange, keep + extra);
    dst.rightCols(extra) = src.rightCols(extra);
  };
  grow_vec(times, tail.times);
  grow_vec(v_src, tail.v_src);
  grow_vec(i_in, tail.i_in);
  grow_vec(i_out, tail.i_out);
  grow_mat(phi, tail.phi);
  grow_mat(v, tail.v);
  grow_mat(u_cell, tail.u_cell);
}

namespace {

double source_at(const Waveform& w, double t) { return w ? w(t) : 0.0; }

void record(Trajectory& traj, Eigen::Index j, const LatticeState<double>& s, double src_in,
            double src_out) {
  const LatticeModel& m = traj.model;
  traj.times[j] = s.t;
  traj.phi.col(j) = s.phi;
  traj.v.col(j) = s.v;
  traj.v_src[j] = src_in;
  if (m.boundary == Boundary::kTerminated) {
    traj.i_in[j] = (src_in - s.v[0]) * m.g_in;
    traj.i_out[j] = (s.v[m.n - 1] - src_out) * m.g_out;
  } else {
    traj.i_in[j] = 0.0;
    traj.i_out[j] = 0.0;
  }
  traj.u_cell.col(j) = m.e_j() * (1.0 - s.phi.array().cos());
}

}  // namespace

Trajectory simulate(const LatticeModel& model, const DriveSpec& drive,
                    const LatticeState<double>& initial, double t_end, double dt) {
  if (model.n < 1) throw ValidationError("lattice needs at least one cell");
  if (initial.phi.size() != model.n || initial.v.size() != model.n) {
    throw ValidationError("initial state size does not match the lattice");
  }
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const double max_dt = 2.0 * std::numbers::pi / model.omega_p() / 100.0;
  if (dt > max_dt * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " s exceeds (2 pi / omega_P) / 100 = " << max_dt << " s";
    throw ValidationError(msg.str());
  }
  if (!(t_end > initial.t)) throw ValidationError("t_end must exceed the start time");
  if (!initial.all_finite()) throw NumericsError("initial state is not finite");

  const double t0 = initial.t;
  const auto steps = static_cast<Eigen::Index>(std::ceil((t_end - t0) / dt - 1e-9));

  // Port voltages on the half-step grid t0 + j dt / 2.
  std::vector<PortSources> src(static_cast<size_t>(2 * steps + 1));
  for (size_t j = 0; j < src.size(); ++j) {
    const double t = t0 + 0.5 * dt * static_cast<double>(j);
    src[j] = {source_at(drive.input, t), source_at(drive.output, t)};
  }

  Trajectory traj;
  traj.model = model;
  traj.times.resize(steps + 1);
  traj.phi.resize(model.n, steps + 1);
  traj.v.resize(model.n, steps + 1);
  traj.v_src.resize(steps + 1);
  traj.i_in.resize(steps + 1);
  traj.i_out.resize(steps + 1);
  traj.u_cell.resize(model.n, steps + 1);

  LatticeState<double> state = initial;
  record(traj, 0, state, src[0].input, src[0].output);
  for (Eigen::Index s = 0; s < steps; ++s) {
    const size_t j = static_cast<size_t>(2 * s);
    const PortSources stage[3] = {src[j], src[j + 1], src[j + 2]};
    rk4_step(state, model, dt, stage);
    // Accumulating dt drifts; pin the clock to the grid.
    state.t = t0 + dt * static_cast<double>(s + 1);
    if (!state.all_finite()) {
      std::ostringstream msg;
      msg << "non-finite lattice state at step " << s + 1 << " (t = " << state.t
          << " s), max |phi| before blow-up = " << traj.phi.col(s).cwiseAbs().maxCoeff();
      throw NumericsError(msg.str());
    }
    record(traj, s + 1, state, src[j + 2].input, src[j + 2].output);
  }
  return traj;
}

Waveform pulse_waveform(const PulseTrain& drive) {
  // Pulses are sorted, so only those within a few tens of widths of t
  // contribute; sech(60) is below double resolution of any pulse peak.
  double max_width = 0.0;
  for (const Pulse& p : drive.pulses) max_width = std::max(max_width, p.width);
  const double reach = 60.0 * max_width;
  return [pulses = drive.pulses, reach](double t) {
    auto it = std::partition_point(pulses.begin(), pulses.end(),
                                   [&](const Pulse& p) { return p.t_center < t - reach; });
    double v = 0.0;
    for (; it != pulses.end() && it->t_center <= t + reach; ++it) v += it->voltage(t);
    return v;
  };
}

Trajectory simulate(const CircuitParams& circuit, const PulseTrain& drive, double t_end,
                    double dt) {
  return simulate(circuit, pulse_waveform(drive), t_end, dt);
}

Trajectory simulate(const CircuitParams& circuit, const Waveform& drive, double t_end,
                    double dt) {
  const LatticeModel model = LatticeModel::from_circuit(circuit);
  return simulate(model, DriveSpec{drive, {}}, LatticeState<double>::zero(model.n), t_end, dt);
}

double default_time_step(const DerivedParams& derived, double divisor) {
  if (!(divisor >= 100.0)) throw ValidationError("dt divisor must be at least 100");
  return 2.0 * std::numbers::pi / derived.omega_p / divisor;
}

double dispersion_relation(const DerivedParams& derived, double k) {
  const double s = std::sin(0.5 * k);
  return derived.omega_p * std::sqrt(1.0 + 4.0 * derived.lambda_j * derived.lambda_j * s * s);
}

double dispersion_check(const CircuitParams& circuit, double k) {
  const DerivedParams derived = derive(circuit);
  const double turns = k / (2.0 * std::numbers::pi);
  int cells = 0;
  for (int n = 2; n <= 256; ++n) {
    const double m = turns * n;
    if (std::abs(m - std::round(m)) < 1e-9) {
      cells = n;
      break;
    }
  }
  if (cells == 0) throw DomainError("wavenumber is not 2 pi m / N for any N <= 256");

  LatticeModel ring = LatticeModel::from_circuit(circuit);
  ring.n = cells;
  ring.boundary = Boundary::kPeriodic;
  ring.g_damp = 0.0;

  constexpr double kAmplitude = 1e-4;
  LatticeState<double> init = LatticeState<double>::zero(cells);
  for (int i = 0; i < cells; ++i) init.phi[i] = kAmplitude * std::cos(k * i);

  const double omega_guess = dispersion_relation(derived, k);
  const double dt = std::min(default_time_step(derived),
                             2.0 * std::numbers::pi / omega_guess / 200.0);
  const double t_end = 40.0 * 2.0 * std::numbers::pi / omega_guess;
  const Trajectory traj = simulate(ring, {}, init, t_end, dt);

  // Zero crossings of cell 0, located by linear interpolation.
  std::vector<double> crossings;
  const auto& x = traj.phi;
  for (Eigen::Index j = 1; j < traj.samples(); ++j) {
    const double a = x(0, j - 1);
    const double b = x(0, j);
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      crossings.push_back(traj.times[j - 1] + dt * a / (a - b));
    }
  }
  if (crossings.size() < 3) throw NumericsError("too few zero crossings to measure frequency");
  const double span = crossings.back() - crossings.front();
  return std::numbers::pi * static_cast<double>(crossings.size() - 1) / span;
}

}  // namespace jtl
