#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Core>

#include "jtl/circuit_model.hpp"
#include "jtl/pulse_synth.hpp"

namespace jtl {

enum class Boundary {
  kTerminated,  // source + Z_in at cell 0, Z_out at cell N-1
  kOpen,        // no port currents
  kPeriodic,    // ring; used only for dispersion checks
};

// Coefficients of the discrete sine-Gordon lattice
//   C_J dv_n/dt = (Phi0/2pi)(phi_{n-1} - 2 phi_n + phi_{n+1}) / L
//                 - I_C sin phi_n - g_damp v_n + port currents
//   dphi_n/dt   = (2pi/Phi0) v_n
// Inductor currents are eliminated through I = (Phi0/2pi) dphi / L.
struct LatticeModel {
  int n = 0;
  double c_j = 0.0;
  double l = 0.0;
  double i_c = 0.0;
  double g_damp = 0.0;  // 1/r_sub, or 0 for a lossless lattice
  double g_in = 0.0;    // 1/Z_in
  double g_out = 0.0;   // 1/Z_out
  Boundary boundary = Boundary::kTerminated;

  static LatticeModel from_circuit(const CircuitParams& circuit);

  double omega_p() const { return 1.0 / std::sqrt(josephson_inductance(i_c) * c_j); }
  double e_j() const { return kReducedFlux * i_c; }
};

template <typename Scalar>
struct LatticeState {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector phi;
  Vector v;
  Scalar t = Scalar(0);

  static LatticeState zero(int n) { return {Vector::Zero(n), Vector::Zero(n), Scalar(0)}; }
  bool all_finite() const { return phi.allFinite() && v.allFinite(); }
};

// Instantaneous source voltages behind Z_in (left) and Z_out (right).
struct PortSources {
  double input = 0.0;
  double output = 0.0;
};

/// Time derivative of `state` with the given port source voltages. The
/// derivative is returned as a state whose phi/v hold dphi/dt and dv/dt.
template <typename Scalar>
LatticeState<Scalar> rhs(const LatticeState<Scalar>& state, const LatticeModel& model,
                         const PortSources& sources) {
  using std::sin;
  const int n = model.n;
  const Scalar k = Scalar(kReducedFlux);
  LatticeState<Scalar> d{typename LatticeState<Scalar>::Vector(n),
                         typename LatticeState<Scalar>::Vector(n), Scalar(1)};
  const auto& phi = state.phi;
  const auto& v = state.v;
  const Scalar inv_l = Scalar(1.0 / model.l);
  const Scalar inv_c = Scalar(1.0 / model.c_j);
  const bool ring = model.boundary == Boundary::kPeriodic;
  for (int i = 0; i < n; ++i) {
    Scalar coupling = Scalar(0);
    if (i > 0) {
      coupling += phi[i - 1] - phi[i];
    } else if (ring) {
      coupling += phi[n - 1] - phi[i];
    }
    if (i < n - 1) {
      coupling += phi[i + 1] - phi[i];
    } else if (ring) {
      coupling += phi[0] - phi[i];
    }
    Scalar current = k * coupling * inv_l - Scalar(model.i_c) * sin(phi[i]) -
                     Scalar(model.g_damp) * v[i];
    if (model.boundary == Boundary::kTerminated) {
      if (i == 0) current += (Scalar(sources.input) - v[i]) * Scalar(model.g_in);
      if (i == n - 1) current += (Scalar(sources.output) - v[i]) * Scalar(model.g_out);
    }
    d.phi[i] = v[i] / k;
    d.v[i] = current * inv_c;
  }
  return d;
}

/// One classic fourth-order Runge-Kutta step. `sources` holds the port
/// voltages at t, t + dt/2 and t + dt.
template <typename Scalar>
void rk4_step(LatticeState<Scalar>& state, const LatticeModel& model, Scalar dt,
              const PortSources (&sources)[3]) {
  const Scalar half = dt / Scalar(2);
  const auto k1 = rhs(state, model, sources[0]);
  LatticeState<Scalar> probe{state.phi + half * k1.phi, state.v + half * k1.v, state.t + half};
  const auto k2 = rhs(probe, model, sources[1]);
  probe.phi = state.phi + half * k2.phi;
  probe.v = state.v + half * k2.v;
  const auto k3 = rhs(probe, model, sources[1]);
  probe.phi = state.phi + dt * k3.phi;
  probe.v = state.v + dt * k3.v;
  const auto k4 = rhs(probe, model, sources[2]);
  const Scalar sixth = dt / Scalar(6);
  state.phi += sixth * (k1.phi + Scalar(2) * k2.phi + Scalar(2) * k3.phi + k4.phi);
  state.v += sixth * (k1.v + Scalar(2) * k2.v + Scalar(2) * k3.v + k4.v);
  state.t += dt;
}

/// Capacitive + Josephson + inductive energy stored in the lattice (J).
template <typename Scalar>
Scalar stored_energy(const LatticeState<Scalar>& state, const LatticeModel& model) {
  using std::cos;
  const int n = model.n;
  const Scalar e_j = Scalar(model.e_j());
  const Scalar k = Scalar(kReducedFlux);
  Scalar e = Scalar(0);
  for (int i = 0; i < n; ++i) {
    e += Scalar(0.5 * model.c_j) * state.v[i] * state.v[i] + e_j * (Scalar(1) - cos(state.phi[i]));
  }
  const int bonds = model.boundary == Boundary::kPeriodic ? n : n - 1;
  for (int i = 0; i < bonds; ++i) {
    const Scalar dphi = state.phi[(i + 1) % n] - state.phi[i];
    e += k * k * dphi * dphi / Scalar(2.0 * model.l);
  }
  return e;
}

// Time-gridded record of a run. Matrices are cells x samples.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd v;
  Eigen::VectorXd v_src;   // source voltage behind Z_in
  Eigen::VectorXd i_in;    // current from Z_in into cell 0
  Eigen::VectorXd i_out;   // current from cell N-1 into Z_out
  Eigen::MatrixXd u_cell;  // E_J (1 - cos phi)
  LatticeModel model;

  Eigen::Index samples() const { return times.size(); }
  int cells() const { return model.n; }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  Eigen::VectorXd v_node_in() const { return v.row(0).transpose(); }
  Eigen::VectorXd v_node_out() const { return v.row(model.n - 1).transpose(); }
  LatticeState<double> state_at(Eigen::Index sample) const;

  /// Appends a continuation whose first sample duplicates our last one.
  void append(const Trajectory& tail);
};

using Waveform = std::function<double(double)>;

struct DriveSpec {
  Waveform input;   // empty: zero
  Waveform output;  // empty: zero
};

/// Closed-form train voltage, summing only pulses near t.
Waveform pulse_waveform(const PulseTrain& drive);

/// General entry point: fixed-step RK4 from `initial` to t_end.
/// Throws ValidationError if dt exceeds (2 pi / omega_P) / 100 and
/// NumericsError if the state becomes non-finite.
Trajectory simulate(const LatticeModel& model, const DriveSpec& drive,
                    const LatticeState<double>& initial, double t_end, double dt);

/// Terminated line driven through Z_in from the zero state.
Trajectory simulate(const CircuitParams& circuit, const PulseTrain& drive, double t_end,
                    double dt);
Trajectory simulate(const CircuitParams& circuit, const Waveform& drive, double t_end,
                    double dt);

/// Default step: one plasma period / divisor.
double default_time_step(const DerivedParams& derived, double divisor = 200.0);

/// Linear dispersion omega_P sqrt(1 + 4 lambda_J^2 sin^2(k/2)).
double dispersion_relation(const DerivedParams& derived, double k);

/// Oscillation frequency (rad/s) of a small standing wave of wavenumber k
/// on a lossless ring built from the circuit's cell parameters. k must be a
/// rational multiple 2 pi m / N of a full turn with N <= 256.
double dispersion_check(const CircuitParams& circuit, double k);

}  // namespace jtl
