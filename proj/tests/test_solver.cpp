#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "jtl/solver.hpp"

using namespace jtl;

namespace {

constexpr double kPi = 3.14159265358979323846;

CircuitParams row2() {
  CircuitTargets t;
  t.i_c = 4e-6;
  t.omega_p = 1.0 / std::sqrt(josephson_inductance(4e-6) * 800e-15);
  t.lambda_j = 3.17;
  t.n_jtl = 5;
  return design_circuit(t);
}

double period(const LatticeModel& m) { return 2 * kPi / m.omega_p(); }

// Frequency (Hz) from interpolated upward zero crossings of row 0.
double crossing_frequency(const Trajectory& traj, int cell) {
  std::vector<double> up;
  for (Eigen::Index j = 1; j < traj.samples(); ++j) {
    const double a = traj.phi(cell, j - 1);
    const double b = traj.phi(cell, j);
    if (a < 0.0 && b >= 0.0) up.push_back(traj.times[j - 1] + traj.dt() * a / (a - b));
  }
  REQUIRE(up.size() >= 3);
  return (up.size() - 1) / (up.back() - up.front());
}

LatticeModel lossless_open(int n) {
  LatticeModel m = LatticeModel::from_circuit(row2());
  m.n = n;
  m.g_damp = 0.0;
  m.boundary = Boundary::kOpen;
  return m;
}

}  // namespace

TEST_CASE("rhs vanishes at the vacuum and at 2 pi shifted equilibria") {
  LatticeModel m = LatticeModel::from_circuit(row2());
  const auto d0 = rhs(LatticeState<double>::zero(m.n), m, PortSources{});
  CHECK(d0.phi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d0.v.cwiseAbs().maxCoeff() == 0.0);

  m.boundary = Boundary::kOpen;
  LatticeState<double> s = LatticeState<double>::zero(m.n);
  s.phi.setConstant(2 * kPi);
  const auto d1 = rhs(s, m, PortSources{});
  CHECK(d1.phi.cwiseAbs().maxCoeff() == 0.0);
  // sin(2 pi) is ~2.4e-16 in floating point, not zero.
  CHECK(d1.v.cwiseAbs().maxCoeff() < 1e-12 * m.i_c / m.c_j);
}

TEST_CASE("rhs works with long double scalars") {
  const LatticeModel m = LatticeModel::from_circuit(row2());
  LatticeState<long double> s = LatticeState<long double>::zero(m.n);
  s.phi[2] = 0.1L;
  const auto d = rhs(s, m, PortSources{});
  CHECK(static_cast<double>(d.v[2]) < 0.0);
}

TEST_CASE("zero drive gives an identically zero trajectory") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const Trajectory t = simulate(c, Waveform{}, 2e-9, default_time_step(d));
  CHECK(t.phi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(t.v.cwiseAbs().maxCoeff() == 0.0);
  CHECK(t.i_out.cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index j = 1; j < t.samples(); ++j) CHECK(t.times[j] > t.times[j - 1]);
}

TEST_CASE("gauge: uniform 2 pi m at rest stays put") {
  LatticeModel m = LatticeModel::from_circuit(row2());
  m.boundary = Boundary::kOpen;
  for (int winding : {1, -2, 3}) {
    LatticeState<double> s = LatticeState<double>::zero(m.n);
    s.phi.setConstant(2 * kPi * winding);
    const Trajectory t = simulate(m, {}, s, 1e-9, period(m) / 200);
    CHECK((t.phi.array() - 2 * kPi * winding).abs().maxCoeff() < 1e-9);
    CHECK(t.v.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("isolated lossless cell oscillates at the plasma frequency") {
  const LatticeModel m = lossless_open(1);
  LatticeState<double> s = LatticeState<double>::zero(1);
  s.phi[0] = 1e-4;
  const Trajectory t = simulate(m, {}, s, 60 * period(m), period(m) / 200);
  const double f_p = 1.0 / (2 * kPi * std::sqrt(josephson_inductance(m.i_c) * m.c_j));
  CHECK(std::abs(crossing_frequency(t, 0) / f_p - 1.0) < 1e-3);
}

TEST_CASE("lossless lattice conserves energy over 5 ns") {
  const LatticeModel m = lossless_open(13);
  for (double amp : {1e-3, 0.8}) {
    LatticeState<double> s = LatticeState<double>::zero(m.n);
    for (int i = 0; i < m.n; ++i) s.phi[i] = amp * std::exp(-0.5 * std::pow((i - 6) / 2.0, 2));
    const Trajectory t = simulate(m, {}, s, 5e-9, period(m) / 200);
    const double e0 = stored_energy(t.state_at(0), m);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < t.samples(); j += 50) {
      worst = std::max(worst, std::abs(stored_energy(t.state_at(j), m) / e0 - 1.0));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("passivity: stored energy never grows without drive") {
  const LatticeModel m = LatticeModel::from_circuit(row2());
  LatticeState<double> s = LatticeState<double>::zero(m.n);
  s.phi << 0.3, -0.2, 0.5, 0.1, -0.4;
  s.v << 1e-6, 0.0, -2e-6, 0.0, 1e-6;
  const Trajectory t = simulate(m, {}, s, 2e-9, period(m) / 200);
  double previous = stored_energy(t.state_at(0), m);
  const double scale = previous;
  bool grew = false;
  for (Eigen::Index j = 1; j < t.samples(); ++j) {
    const double e = stored_energy(t.state_at(j), m);
    if (e > previous + 1e-12 * scale) grew = true;
    previous = e;
  }
  CHECK_FALSE(grew);
  CHECK(previous < 0.5 * scale);
}

TEST_CASE("linear dispersion on a ring") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  CHECK(dispersion_relation(d, kPi) / d.omega_p ==
        doctest::Approx(std::sqrt(1 + 4 * d.lambda_j * d.lambda_j)).epsilon(1e-12));
  CHECK(dispersion_relation(d, kPi) / d.omega_p == doctest::Approx(6.42).epsilon(2e-3));
  double previous = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double w = dispersion_relation(d, kPi * k / 20);
    CHECK(w > previous);
    previous = w;
  }
  for (double k : {0.0, kPi / 4, kPi / 2, 2 * kPi / 3, kPi}) {
    const double measured = dispersion_check(c, k);
    CHECK(std::abs(measured / dispersion_relation(d, k) - 1.0) < 5e-3);
  }
  CHECK_THROWS_AS(dispersion_check(c, 1.0), DomainError);
}

TEST_CASE("mirrored ports give the mirrored trajectory") {
  CircuitParams c = row2();
  c.z_out = 7.0;
  const LatticeModel a = LatticeModel::from_circuit(c);
  LatticeModel b = a;
  std::swap(b.g_in, b.g_out);
  const double dt = period(a) / 200;
  const Pulse p = sech_pulse(kFluxQuantum, 8e-12, 50e-12);
  const Waveform w = [p](double t) { return p.voltage(t); };
  const Trajectory ta = simulate(a, DriveSpec{w, {}}, LatticeState<double>::zero(a.n), 1e-9, dt);
  const Trajectory tb = simulate(b, DriveSpec{{}, w}, LatticeState<double>::zero(b.n), 1e-9, dt);
  const double scale = ta.phi.cwiseAbs().maxCoeff();
  REQUIRE(scale > 1.0);
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i) {
    worst = std::max(worst, (ta.phi.row(i) - tb.phi.row(a.n - 1 - i)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-9 * scale);
}

TEST_CASE("step larger than a hundredth of a plasma period is rejected") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const double limit = 2 * kPi / d.omega_p / 100;
  CHECK_NOTHROW(simulate(c, Waveform{}, 100 * limit, limit));
  try {
    simulate(c, Waveform{}, 1e-9, 1.5 * limit);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("dt") != std::string::npos);
  }
  CHECK_THROWS_AS(default_time_step(d, 50.0), ValidationError);
}

TEST_CASE("non-finite state aborts with a diagnostic") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const Waveform bad = [](double t) {
    return t > 0.2e-9 ? std::numeric_limits<double>::quiet_NaN() : 1e-6;
  };
  try {
    simulate(c, bad, 1e-9, default_time_step(d));
    FAIL("expected NumericsError");
  } catch (const NumericsError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("simulation is deterministic") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const PulseTrain train =
      compile_envelope(PhaseEnvelope::flat_top(9), schedule_spacing(d, 1), 10e-12, 50e-12);
  const Trajectory a = simulate(c, train, 1e-9, default_time_step(d));
  const Trajectory b = simulate(c, train, 1e-9, default_time_step(d));
  CHECK(a.phi == b.phi);
  CHECK(a.v == b.v);
  CHECK(a.i_out == b.i_out);
}

TEST_CASE("halving dt changes the trajectory by well under 0.1%") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const PulseTrain train =
      compile_envelope(PhaseEnvelope::flat_top(9), schedule_spacing(d, 1), 10e-12, 50e-12);
  const double t_end = 2000 * default_time_step(d, 200);
  const Trajectory coarse = simulate(c, train, t_end, default_time_step(d, 200));
  const Trajectory fine = simulate(c, train, t_end, default_time_step(d, 400));
  REQUIRE(fine.samples() == 2 * coarse.samples() - 1);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < coarse.samples(); ++j) {
    worst = std::max(worst, (coarse.phi.col(j) - fine.phi.col(2 * j)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-3 * coarse.phi.cwiseAbs().maxCoeff());
}

TEST_CASE("trajectory records port currents and continuation") {
  const CircuitParams c = row2();
  const DerivedParams d = derive(c);
  const Pulse p = sech_pulse(kFluxQuantum, 10e-12, 60e-12);
  const Waveform w = [p](double t) { return p.voltage(t); };
  const double dt = default_time_step(d);
  const Trajectory whole = simulate(c, w, 0.6e-9, dt);
  const LatticeModel m = LatticeModel::from_circuit(c);
  Trajectory first = simulate(m, DriveSpec{w, {}}, LatticeState<double>::zero(m.n), 0.3e-9, dt);
  first.append(simulate(m, DriveSpec{w, {}}, first.state_at(first.samples() - 1), 0.6e-9, dt));
  REQUIRE(first.samples() == whole.samples());
  CHECK((first.phi - whole.phi).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index j = 0; j < whole.samples(); j += 37) {
    CHECK(whole.i_in[j] == doctest::Approx((whole.v_src[j] - whole.v(0, j)) / c.z_in));
    CHECK(whole.i_out[j] == doctest::Approx(whole.v(m.n - 1, j) / c.z_out));
    CHECK(whole.v_src[j] == doctest::Approx(w(whole.times[j])));
  }
  CHECK(whole.u_cell.minCoeff() >= 0.0);
}
