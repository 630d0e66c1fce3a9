#include "jtl/circuit_model.hpp"

#include <cmath>
#include <numbers>

namespace jtl {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be a finite positive value");
  }
}

constexpr double kSubgapVoltage = 20e-3;  // I_C * R_sub, V

}  // namespace

void CircuitParams::validate() const {
  require_positive(i_c, "i_c");
  require_positive(c_j, "c_j");
  require_positive(l, "l");
  require_positive(r_n, "r_n");
  require_positive(r_sub, "r_sub");
  require_positive(z_in, "z_in");
  require_positive(z_out, "z_out");
  if (n_jtl < 2) throw ValidationError("n_jtl must be at least 2");
}

std::vector<std::string> CircuitParams::warnings() const {
  std::vector<std::string> out;
  const DerivedParams d = derive(*this);
  if (d.beta_c >= 1.0) {
    out.push_back("beta_c = " + std::to_string(d.beta_c) +
                  " >= 1: junctions are not overdamped");
  }
  return out;
}

double josephson_inductance(double i_c) { return kReducedFlux / i_c; }

double default_normal_resistance() {
  return josephson_inductance(3e-6) / 30.71e-12;
}

double default_subgap_resistance(double i_c) {
  require_positive(i_c, "i_c");
  return kSubgapVoltage / i_c;
}

DerivedParams derive(const CircuitParams& params) {
  params.validate();
  DerivedParams d;
  d.l_j = josephson_inductance(params.i_c);
  d.lambda_j = std::sqrt(d.l_j / params.l);
  d.omega_p = 1.0 / std::sqrt(d.l_j * params.c_j);
  d.c_bar = d.lambda_j * d.omega_p;
  d.z_jtl = std::sqrt(params.l / params.c_j);
  d.beta_c = params.c_j * params.r_n * params.r_n / d.l_j;
  d.alpha_in = d.z_jtl / params.z_in;
  d.alpha_out = d.z_jtl / params.z_out;
  d.tau_lr = d.l_j / params.r_n;
  d.e_j = kReducedFlux * params.i_c;
  d.e_0 = 8.0 * d.e_j * d.lambda_j;
  return d;
}

ReflectionThresholds reflection_thresholds(double v_tilde, ThresholdVariant variant) {
  if (!(v_tilde > 0.0 && v_tilde < 1.0)) {
    throw DomainError("v_tilde must lie in (0, 1)");
  }
  const double s = std::sqrt(1.0 - v_tilde * v_tilde);
  ReflectionThresholds t;
  t.alpha_0 = std::abs((s - 1.0) / (2.0 * (std::atan(s / v_tilde) / s + v_tilde)));
  switch (variant) {
    case ThresholdVariant::kAsPrinted:
      t.alpha_inf = std::abs(4.0 * v_tilde / (s - 1.0));
      break;
    case ThresholdVariant::kQuotedConsistent:
      t.alpha_inf = 4.0 * v_tilde / s;
      break;
  }
  return t;
}

std::pair<double, double> energy_scales(const DerivedParams& derived) {
  const double e_0 = 8.0 * derived.e_j * derived.lambda_j;
  return {e_0, 2.0 * e_0};
}

CircuitParams design_circuit(const CircuitTargets& targets) {
  require_positive(targets.i_c, "i_c");
  require_positive(targets.omega_p, "omega_p");
  require_positive(targets.lambda_j, "lambda_j");
  require_positive(targets.alpha_in, "alpha_in");
  require_positive(targets.alpha_out, "alpha_out");

  CircuitParams p;
  p.i_c = targets.i_c;
  const double l_j = josephson_inductance(targets.i_c);
  p.c_j = 1.0 / (targets.omega_p * targets.omega_p * l_j);
  p.l = l_j / (targets.lambda_j * targets.lambda_j);
  p.r_n = targets.r_n > 0.0 ? targets.r_n : default_normal_resistance();
  p.r_sub = targets.r_sub > 0.0 ? targets.r_sub : default_subgap_resistance(targets.i_c);
  p.n_jtl = targets.n_jtl;
  const double z_jtl = std::sqrt(p.l / p.c_j);
  p.z_in = z_jtl / targets.alpha_in;
  p.z_out = z_jtl / targets.alpha_out;
  p.validate();
  return p;
}

}  // namespace jtl
