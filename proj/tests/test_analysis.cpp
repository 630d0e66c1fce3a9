#include <doctest.h>

#include <cmath>

#include "jtl/analysis.hpp"

using namespace jtl;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd grid(Eigen::Index n, double dt) {
  return Eigen::VectorXd::LinSpaced(n, 0.0, dt * static_cast<double>(n - 1));
}

Eigen::VectorXd burst(const Eigen::VectorXd& t, double t0, double sigma, double f) {
  return t.unaryExpr([&](double x) {
    return std::exp(-0.5 * std::pow((x - t0) / sigma, 2)) * std::cos(2 * kPi * f * (x - t0));
  });
}

}  // namespace

TEST_CASE("sinusoid peak lands on its frequency") {
  const double dt = 0.25e-12;
  const double f = 20e9;
  const Eigen::Index n = 200 * 200;  // 200 whole periods
  const Eigen::VectorXd t = grid(n, dt);
  const Eigen::VectorXd x = (2 * kPi * f * t.array()).sin().matrix();
  for (Window w : {Window::kRectangular, Window::kHann}) {
    const SpectrumResult s = psd(x, dt, w);
    REQUIRE(s.has_peak);
    const double df = s.freqs[1] - s.freqs[0];
    CHECK(std::abs(s.f0 - f) <= df);
    CHECK(s.fwhm > 0.0);
    CHECK(s.psd.minCoeff() >= 0.0);
  }
  const SpectrumResult via_times = psd(t, x);
  CHECK(via_times.f0 == psd(x, dt).f0);
}

TEST_CASE("Gaussian burst width matches the analytic transform") {
  const double dt = 1e-12;
  const double sigma = 0.4e-9;
  const Eigen::VectorXd t = grid(8000, dt);
  const SpectrumResult s = psd(burst(t, 4e-9, sigma, 18e9), dt);
  REQUIRE(s.has_peak);
  // |X|^2 of exp(-t^2 / 2 sigma^2) is a Gaussian of std 1 / (2 sqrt2 pi sigma).
  const double power_fwhm = std::sqrt(std::log(2.0)) / (kPi * sigma);
  CHECK(std::abs(s.fwhm / power_fwhm - 1.0) < 0.03);
  CHECK(std::abs(s.f0 / 18e9 - 1.0) < 0.01);
  // The magnitude spectrum |X| is wider by sqrt 2: 2 sqrt(2 ln 2) / (2 pi sigma).
  SpectrumResult mag = psd(burst(t, 4e-9, sigma, 18e9), dt, Window::kRectangular, 64);
  mag.psd = mag.psd.cwiseSqrt().eval();
  const double half = 0.5 * mag.psd.maxCoeff();
  Eigen::Index lo = 0, hi = mag.psd.size() - 1;
  while (mag.psd[lo] < half) ++lo;
  while (mag.psd[hi] < half) --hi;
  const double mag_fwhm = mag.freqs[hi] - mag.freqs[lo];
  CHECK(std::abs(mag_fwhm / (2 * std::sqrt(2 * std::log(2.0)) / (2 * kPi * sigma)) - 1.0) < 0.03);
}

TEST_CASE("Parseval: psd integrates to the record energy") {
  const double dt = 0.5e-12;
  const Eigen::VectorXd t = grid(5000, dt);
  Eigen::VectorXd x = burst(t, 1.2e-9, 0.2e-9, 15e9) + 0.3 * burst(t, 1.5e-9, 0.1e-9, 31e9);
  x.array() += 0.05;
  const SpectrumResult s = psd(x, dt);
  const double df = s.freqs[1] - s.freqs[0];
  const double from_psd = s.psd.sum() * df * static_cast<double>(x.size()) * dt;
  const double energy = x.squaredNorm() * dt;
  CHECK(std::abs(from_psd / energy - 1.0) < 5e-3);
  const EnergySpectrum es = energy_spectrum(x, dt);
  CHECK(std::abs(es.density.sum() * es.df / energy - 1.0) < 5e-3);
}

TEST_CASE("delaying a burst inside the record leaves the spectrum unchanged") {
  const double dt = 1e-12;
  const Eigen::VectorXd t = grid(6000, dt);
  const SpectrumResult a = psd(burst(t, 2e-9, 0.2e-9, 17e9), dt);
  const SpectrumResult b = psd(burst(t, 3.7e-9, 0.2e-9, 17e9), dt);
  CHECK(a.f0 == b.f0);
  CHECK(a.fwhm == doctest::Approx(b.fwhm).epsilon(1e-6));
  CHECK((a.psd - b.psd).cwiseAbs().maxCoeff() < 1e-9 * a.psd.maxCoeff());
}

TEST_CASE("spectrum input checks") {
  CHECK_THROWS_AS(psd(Eigen::VectorXd::Ones(100), 1e-12), ValidationError);
  Eigen::VectorXd t = grid(400, 1e-12);
  t[200] += 0.3e-12;
  CHECK_THROWS_AS(psd(t, Eigen::VectorXd::Ones(400)), ValidationError);
  const SpectrumResult flat = psd(Eigen::VectorXd::Zero(400), 1e-12);
  CHECK_FALSE(flat.has_peak);
}

TEST_CASE("power waves at matched and open ports") {
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(50, -1.0, 2.0);
  const double z0 = 50.0;
  const PowerWaves matched = power_waves(v, v / z0, z0);
  CHECK(matched.backward.cwiseAbs().maxCoeff() < 1e-30);
  CHECK(matched.forward.isApprox((v.array().square() / z0).matrix()));
  const PowerWaves open = power_waves(v, Eigen::VectorXd::Zero(50), z0);
  const Eigen::VectorXd quarter = (v.array().square() / (4 * z0)).matrix();
  CHECK(open.forward.isApprox(quarter));
  CHECK(open.backward.isApprox(quarter));
  CHECK_THROWS_AS(power_waves(v, v, 0.0), DomainError);
}

TEST_CASE("efficiency needs injected energy") {
  PortRecord in{Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10), 1.0};
  CHECK_THROWS_AS(efficiency(in, in, 1e-12), DomainError);
  PortRecord src{Eigen::VectorXd::Ones(10), Eigen::VectorXd::Ones(10), 1.0};
  PortRecord load{0.5 * Eigen::VectorXd::Ones(10), 0.5 * Eigen::VectorXd::Ones(10), 1.0};
  CHECK(efficiency(src, load, 1e-12) == doctest::Approx(0.25));
}

TEST_CASE("band power of a 1 uW forward wave is -30 dBm") {
  const double dt = 1e-12;
  const double f = 10e9;
  const double z0 = 50.0;
  const Eigen::Index n = 100 * 100;  // 100 periods
  const Eigen::VectorXd t = grid(n, dt);
  const double amp = std::sqrt(2 * 1e-6 * z0);
  const Eigen::VectorXd v = amp * (2 * kPi * f * t.array()).sin().matrix();
  const PortRecord out{v, v / z0, z0};
  const double dbm = band_power_dbm(out, dt, f, 0.5 * f, n * dt);
  CHECK(dbm == doctest::Approx(-30.0).epsilon(0.02 / 30.0));
  CHECK_THROWS_AS(band_power_dbm(out, dt, f, 0.0, n * dt), DomainError);
}

TEST_CASE("damped cosine fit") {
  const double dt = 0.5e-12;
  const double f = 18e9;
  const double tau = 0.5e-9;
  const Eigen::VectorXd t = grid(6000, dt);
  const Eigen::VectorXd x =
      ((-t.array() / tau).exp() * (2 * kPi * f * t.array()).cos()).matrix();
  const BreatherFit fit = breather_fit(x, dt, 0.0);
  CHECK(std::abs(fit.f_osc / f - 1.0) < 0.02);
  CHECK(std::abs(fit.decay_time / tau - 1.0) < 0.05);
  CHECK(fit.peaks >= 4);
  CHECK(fit.fit_residual < 0.05);

  const Eigen::VectorXd fast = ((-t.array() / 40e-12).exp() * (2 * kPi * f * t.array()).cos()).matrix();
  CHECK_THROWS_AS(breather_fit(fast, dt, 0.0), NumericsError);
}

TEST_CASE("energy audit closes on a driven lattice") {
  CircuitTargets targets;
  targets.i_c = 4e-6;
  targets.omega_p = 2 * kPi * 20e9;
  targets.lambda_j = 3.3;
  targets.n_jtl = 13;
  targets.alpha_out = 0.2;
  const CircuitParams c = design_circuit(targets);
  const DerivedParams d = derive(c);
  const double tau = sech_time_constant(single_fluxon_width(d, 0.75));
  const PulseTrain train{{sech_pulse(kFluxQuantum, tau, 5 * tau)}, 10 * tau, false, false};
  const Trajectory traj = simulate(c, train, 3e-9, default_time_step(d));
  const EnergyAudit audit = energy_audit(traj);
  CHECK(audit.injected > 0.0);
  CHECK(audit.reflected >= 0.0);
  CHECK(audit.dissipated >= 0.0);
  CHECK(audit.closure_error() < 0.01);

  const SpectrumResult s = psd(traj.v_node_out(), traj.dt());
  const PowerReport r = power_report(traj, s, train.duration);
  CHECK(r.eta >= 0.0);
  CHECK(r.eta <= 1.0 + 1e-6);
  CHECK(r.e_in_fwd == doctest::Approx(audit.injected));
}
