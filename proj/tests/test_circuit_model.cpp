#include <doctest.h>

#include <cmath>
#include <string>

#include "jtl/circuit_model.hpp"

using namespace jtl;

namespace {

constexpr double kPhi0 = 2.067833848e-15;
constexpr double kPi = 3.14159265358979323846;

CircuitParams table_row2() {
  CircuitParams p;
  p.i_c = 4e-6;
  p.c_j = 800e-15;
  p.l = 8.177e-12;
  p.r_n = 3.57;
  p.r_sub = 5000.0;
  p.n_jtl = 5;
  p.z_in = 1.0;
  p.z_out = 10.0;
  return p;
}

}  // namespace

TEST_CASE("Josephson inductance at 4 uA") {
  CHECK(josephson_inductance(4e-6) == doctest::Approx(82.27e-12).epsilon(1e-3));
  CHECK(josephson_inductance(4e-6) == doctest::Approx(kPhi0 / (2 * kPi * 4e-6)).epsilon(1e-12));
}

TEST_CASE("derive reproduces the flat-top row 2 geometry") {
  const DerivedParams d = derive(table_row2());
  CHECK(d.lambda_j == doctest::Approx(3.17).epsilon(0.01));
  CHECK(d.omega_p / (2 * kPi) == doctest::Approx(19.62e9).epsilon(1e-3));
  CHECK(d.c_bar == d.lambda_j * d.omega_p);
  CHECK(d.z_jtl == doctest::Approx(std::sqrt(8.177e-12 / 800e-15)).epsilon(1e-12));
  CHECK(d.alpha_in * 1.0 == doctest::Approx(d.z_jtl));
  CHECK(d.alpha_out * 10.0 == doctest::Approx(d.z_jtl));
  CHECK(d.tau_lr == doctest::Approx(d.l_j / 3.57));
  CHECK(d.e_0 > 0.0);
}

TEST_CASE("derive is a pure function") {
  const DerivedParams a = derive(table_row2());
  const DerivedParams b = derive(table_row2());
  CHECK(a.lambda_j == b.lambda_j);
  CHECK(a.omega_p == b.omega_p);
  CHECK(a.e_0 == b.e_0);
  CHECK(a.beta_c == b.beta_c);
}

TEST_CASE("geometry round trip to 1e-12") {
  CircuitTargets t;
  t.i_c = 5e-6;
  t.omega_p = 2 * kPi * 21.9e9;
  t.lambda_j = 3.17;
  t.n_jtl = 5;
  const CircuitParams c = design_circuit(t);
  const DerivedParams d = derive(c);
  CHECK(std::abs(d.omega_p / t.omega_p - 1) < 1e-12);
  CHECK(std::abs(d.lambda_j / t.lambda_j - 1) < 1e-12);
  CHECK(std::abs(d.alpha_in / 5.0 - 1) < 1e-12);
  CHECK(std::abs(d.alpha_out / 0.25 - 1) < 1e-12);
  CHECK(d.alpha_in * c.z_in == doctest::Approx(d.z_jtl).epsilon(1e-12));
  CHECK(d.alpha_out * c.z_out == doctest::Approx(d.z_jtl).epsilon(1e-12));
}

TEST_CASE("load resistance of the single-fluxon configuration") {
  CircuitTargets t;
  t.i_c = 4e-6;
  t.omega_p = 2 * kPi * 20e9;
  t.lambda_j = 3.3;
  t.n_jtl = 13;
  t.alpha_out = 0.2;
  CHECK(design_circuit(t).z_out == doctest::Approx(15.7).epsilon(0.005));
}

TEST_CASE("validation names the offending field") {
  CircuitParams p = table_row2();
  p.i_c = -1e-6;
  try {
    p.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("i_c") != std::string::npos);
  }
  p = table_row2();
  p.n_jtl = 1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = table_row2();
  p.z_out = 0.0;
  CHECK_THROWS_AS(derive(p), ValidationError);
}

TEST_CASE("beta_C >= 1 is a warning only") {
  CircuitParams p = table_row2();
  CHECK(p.warnings().empty());
  p.r_n = 100.0;
  CHECK_NOTHROW(derive(p));
  CHECK(p.warnings().size() == 1);
}

TEST_CASE("default normal resistance sets tau_LR = 30.71 ps at 3 uA") {
  CHECK(default_normal_resistance() == doctest::Approx(3.572).epsilon(1e-3));
  CircuitParams p = table_row2();
  p.i_c = 3e-6;
  p.r_n = default_normal_resistance();
  CHECK(derive(p).tau_lr == doctest::Approx(30.71e-12).epsilon(1e-9));
  CHECK(derive(p).beta_c == doctest::Approx(0.12).epsilon(0.05));
}

TEST_CASE("reflection thresholds at v = 0.75") {
  const auto printed = reflection_thresholds(0.75, ThresholdVariant::kAsPrinted);
  CHECK(printed.alpha_0 == doctest::Approx(0.0919).epsilon(1e-3));
  CHECK(printed.alpha_inf == doctest::Approx(8.86).epsilon(1e-3));
  const auto quoted = reflection_thresholds(0.75);
  CHECK(quoted.alpha_0 == printed.alpha_0);
  CHECK(quoted.alpha_inf == doctest::Approx(4.54).epsilon(1e-3));
  CHECK_THROWS_AS(reflection_thresholds(0.0), DomainError);
  CHECK_THROWS_AS(reflection_thresholds(1.0), DomainError);
}

TEST_CASE("reflection threshold properties on a dense grid") {
  CHECK(reflection_thresholds(1e-6).alpha_0 < 1e-6);
  double previous = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double v = k / 1000.0;
    for (auto variant : {ThresholdVariant::kAsPrinted, ThresholdVariant::kQuotedConsistent}) {
      const auto t = reflection_thresholds(v, variant);
      CHECK(t.alpha_0 < t.alpha_inf);
    }
    const double a0 = reflection_thresholds(v).alpha_0;
    CHECK(a0 > previous);
    previous = a0;
  }
}

TEST_CASE("fluxon rest energy") {
  CircuitParams p = table_row2();
  DerivedParams d = derive(p);
  const double e_j = kPhi0 / (2 * kPi) * 4e-6;
  CHECK(d.e_j == doctest::Approx(1.3166e-21).epsilon(1e-4));
  const auto [e0, pair] = energy_scales(d);
  CHECK(e0 == doctest::Approx(8 * e_j * d.lambda_j).epsilon(1e-12));
  CHECK(e0 == doctest::Approx(3.34e-20).epsilon(3e-3));
  CHECK(pair == 2 * e0);
  d.lambda_j *= 2;
  CHECK(energy_scales(d).first == doctest::Approx(2 * e0).epsilon(1e-14));
}
