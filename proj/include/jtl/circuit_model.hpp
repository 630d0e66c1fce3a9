#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jtl/common.hpp"

namespace jtl {

// Physical description of an N-cell Josephson transmission line: identical
// unshunted junctions (I_C, C_J) coupled by series inductors L, driven through
// a resistive source Z_in and terminated by a resistive load Z_out.
//
// r_n is the junction resistance that sets the phase-slip relaxation time
// tau_LR = L_J / r_n (and beta_C). r_sub is the subgap resistance, the linear
// conductance that actually damps the junction at the sub-millivolt voltages
// seen in the line.
struct CircuitParams {
  double i_c = 0.0;    // A
  double c_j = 0.0;    // F
  double l = 0.0;      // H per cell
  double r_n = 0.0;    // Ohm
  double r_sub = 0.0;  // Ohm
  int n_jtl = 0;
  double z_in = 0.0;   // Ohm
  double z_out = 0.0;  // Ohm

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  /// Soft checks (e.g. beta_C >= 1). Empty when the circuit is in the
  /// intended overdamped regime.
  std::vector<std::string> warnings() const;
};

struct DerivedParams {
  double l_j = 0.0;        // H
  double lambda_j = 0.0;   // unit cells
  double omega_p = 0.0;    // rad/s
  double c_bar = 0.0;      // cells/s
  double z_jtl = 0.0;      // Ohm
  double beta_c = 0.0;
  double alpha_in = 0.0;
  double alpha_out = 0.0;
  double tau_lr = 0.0;     // s
  double e_j = 0.0;        // J
  double e_0 = 0.0;        // J, fluxon rest energy 8 E_J lambda_J
};

/// Josephson inductance Phi0 / (2 pi I_C).
double josephson_inductance(double i_c);

/// Normal resistance giving tau_LR = 30.71 ps at I_C = 3 uA (about 3.57 Ohm).
double default_normal_resistance();

/// Subgap resistance from a fixed I_C * R_sub product of 20 mV.
double default_subgap_resistance(double i_c);

DerivedParams derive(const CircuitParams& params);

enum class ThresholdVariant {
  kAsPrinted,         // alpha_inf = |4v / (sqrt(1-v^2) - 1)|
  kQuotedConsistent,  // alpha_inf = 4v / sqrt(1-v^2)
};

struct ReflectionThresholds {
  double alpha_0 = 0.0;
  double alpha_inf = 0.0;
};

/// Impedance-ratio thresholds bounding the absorption regime for a fluxon
/// arriving at scaled velocity v_tilde in (0, 1).
ReflectionThresholds reflection_thresholds(
    double v_tilde, ThresholdVariant variant = ThresholdVariant::kQuotedConsistent);

/// (E_0, 2 E_0): fluxon rest energy and the fluxon + antifluxon separation
/// threshold.
std::pair<double, double> energy_scales(const DerivedParams& derived);

// Geometry targets for building a circuit from the quantities the
// experiments are parameterised by.
struct CircuitTargets {
  double i_c = 0.0;
  double omega_p = 0.0;   // rad/s
  double lambda_j = 0.0;  // unit cells
  int n_jtl = 0;
  double alpha_in = 5.0;
  double alpha_out = 0.25;
  double r_n = 0.0;    // 0 selects default_normal_resistance()
  double r_sub = 0.0;  // 0 selects default_subgap_resistance(i_c)
};

/// L_J from I_C, then C_J = 1/(omega_P^2 L_J), L = L_J / lambda_J^2, and the
/// terminations from Z_JTL and the requested impedance ratios.
CircuitParams design_circuit(const CircuitTargets& targets);

}  // namespace jtl
