#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "jtl/circuit_model.hpp"

namespace jtl {

/// arcsech(1/2) = ln(2 + sqrt(3)).
inline const double kArcsechHalf = std::log(2.0 + std::sqrt(3.0));

/// Hyperbolic-secant voltage pulse with time integral `area`:
///   V(t) = area / (pi width) * sech((t - t_center) / width)
template <typename Scalar>
Scalar sech_voltage(Scalar t, Scalar t_center, Scalar area, Scalar width) {
  using std::abs;
  using std::cosh;
  const Scalar x = (t - t_center) / width;
  // sech underflows to exactly zero well before |x| = 710.
  if (abs(x) > Scalar(700)) return Scalar(0);
  return area / (Scalar(std::numbers::pi) * width) / cosh(x);
}

struct Pulse {
  double t_center = 0.0;  // s
  double area = 0.0;      // Wb
  double width = 0.0;     // sech time constant, s

  double voltage(double t) const { return sech_voltage(t, t_center, area, width); }
  double peak() const { return area / (std::numbers::pi * width); }
};

struct PulseTrain {
  std::vector<Pulse> pulses;  // sorted by t_center
  double duration = 0.0;      // s
  bool balanced = false;      // areas sum to exactly zero
  bool overlapping = false;   // spacing <= 2 width somewhere

  /// Closed-form superposition of every pulse at time t.
  double voltage(double t) const;

  /// voltage() at each point of `times`.
  Eigen::VectorXd sample(const Eigen::Ref<const Eigen::VectorXd>& times) const;

  double net_area() const;
  double last_center() const;
};

enum class EnvelopeShape { kGaussian, kFlatTop, kCustom };

// Target magnitudes of the phase extrema, one per half-cycle of the
// oscillation the train imposes on the first junction.
struct PhaseEnvelope {
  std::vector<double> theta;
  EnvelopeShape shape = EnvelopeShape::kCustom;

  void validate() const;

  static PhaseEnvelope flat_top(int half_cycles, double theta = std::numbers::pi);
  /// sigma <= 0 selects half_cycles / 6.
  static PhaseEnvelope gaussian(int half_cycles, double peak = std::numbers::pi,
                                double sigma = 0.0);
};

/// Throws DomainError unless width > 0.
Pulse sech_pulse(double area, double width, double t_center);

/// Half-maximum duration of a fluxon crossing a cell at scaled velocity
/// v_tilde: 2 sqrt(1 - v^2) arcsech(1/2) / (v omega_P).
double single_fluxon_width(const DerivedParams& derived, double v_tilde);

/// Multi-pulse width: the LR relaxation time tau_LR.
double train_pulse_width(const DerivedParams& derived);

/// sech time constant whose full width at half maximum is `fwhm`.
double sech_time_constant(double fwhm);

/// Signed phase targets s_k = (-1)^(k+1) theta_k bracketed by zeros; pulse k
/// carries (s_k - s_{k-1}) Phi0 / 2pi and sits at t_start + (k-1) spacing.
PulseTrain compile_envelope(const PhaseEnvelope& envelope, double spacing, double width,
                            double t_start);

/// half_period_multiple * pi / omega_P; the multiple must be odd so that
/// alternating polarities stay in phase with the plasma oscillation.
double schedule_spacing(const DerivedParams& derived, int half_period_multiple);

void to_json(nlohmann::json& j, const Pulse& p);
void to_json(nlohmann::json& j, const PulseTrain& train);
void from_json(const nlohmann::json& j, PulseTrain& train);

}  // namespace jtl
