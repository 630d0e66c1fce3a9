#include "jtl/pulse_synth.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace jtl {

double PulseTrain::voltage(double t) const {
  double v = 0.0;
  for (const Pulse& p : pulses) v += p.voltage(t);
  return v;
}

Eigen::VectorXd PulseTrain::sample(const Eigen::Ref<const Eigen::VectorXd>& times) const {
  return times.unaryExpr([this](double t) { return voltage(t); });
}

double PulseTrain::net_area() const {
  double sum = 0.0;
  for (const Pulse& p : pulses) sum += p.area;
  return sum;
}

double PulseTrain::last_center() const {
  return pulses.empty() ? 0.0 : pulses.back().t_center;
}

void PhaseEnvelope::validate() const {
  if (theta.empty()) throw ValidationError("phase envelope is empty");
  for (double t : theta) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw ValidationError("phase envelope magnitudes must be finite and >= 0");
    }
  }
  if (shape == EnvelopeShape::kFlatTop && theta.size() > 2) {
    const bool uniform = std::all_of(theta.begin() + 1, theta.end() - 1,
                                     [&](double t) { return t == theta[1]; });
    if (!uniform) throw ValidationError("flat_top envelope interior must be uniform");
  }
}

PhaseEnvelope PhaseEnvelope::flat_top(int half_cycles, double theta) {
  if (half_cycles < 1) throw ValidationError("envelope needs at least one half-cycle");
  return {std::vector<double>(static_cast<size_t>(half_cycles), theta), EnvelopeShape::kFlatTop};
}

PhaseEnvelope PhaseEnvelope::gaussian(int half_cycles, double peak, double sigma) {
  if (half_cycles < 1) throw ValidationError("envelope needs at least one half-cycle");
  if (sigma <= 0.0) sigma = half_cycles / 6.0;
  const double center = (half_cycles + 1) / 2.0;
  PhaseEnvelope env{{}, EnvelopeShape::kGaussian};
  env.theta.reserve(static_cast<size_t>(half_cycles));
  for (int k = 1; k <= half_cycles; ++k) {
    const double x = (k - center) / sigma;
    env.theta.push_back(peak * std::exp(-0.5 * x * x));
  }
  return env;
}

Pulse sech_pulse(double area, double width, double t_center) {
  if (!(width > 0.0)) throw DomainError("pulse width must be positive");
  return {t_center, area, width};
}

double single_fluxon_width(const DerivedParams& derived, double v_tilde) {
  if (!(v_tilde > 0.0 && v_tilde < 1.0)) throw DomainError("v_tilde must lie in (0, 1)");
  return 2.0 * std::sqrt(1.0 - v_tilde * v_tilde) * kArcsechHalf / (v_tilde * derived.omega_p);
}

double train_pulse_width(const DerivedParams& derived) { return derived.tau_lr; }

double sech_time_constant(double fwhm) {
  if (!(fwhm > 0.0)) throw DomainError("pulse width must be positive");
  return fwhm / (2.0 * kArcsechHalf);
}

PulseTrain compile_envelope(const PhaseEnvelope& envelope, double spacing, double width,
                            double t_start) {
  envelope.validate();
  if (!(spacing > 0.0)) throw ValidationError("pulse spacing must be positive");
  if (!(width > 0.0)) throw DomainError("pulse width must be positive");

  const size_t m = envelope.theta.size();
  PulseTrain train;
  train.pulses.reserve(m + 1);
  double previous = 0.0;
  double running = 0.0;
  for (size_t k = 1; k <= m + 1; ++k) {
    const double t = t_start + static_cast<double>(k - 1) * spacing;
    double area;
    if (k <= m) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      const double target = sign * envelope.theta[k - 1];
      area = (target - previous) * kReducedFlux;
      previous = target;
      running += area;
    } else {
      // Closing pulse cancels the accumulated sum exactly.
      area = -running;
    }
    train.pulses.push_back({t, area, width});
  }
  train.duration = train.last_center() + 5.0 * width;
  train.balanced = true;
  train.overlapping = m > 0 && spacing <= 2.0 * width;
  return train;
}

double schedule_spacing(const DerivedParams& derived, int half_period_multiple) {
  if (half_period_multiple <= 0 || half_period_multiple % 2 == 0) {
    throw ValidationError(
        "spacing multiple must be a positive odd number of half plasma periods; an even "
        "multiple puts alternating polarities out of phase with the oscillation");
  }
  return half_period_multiple * std::numbers::pi / derived.omega_p;
}

void to_json(nlohmann::json& j, const Pulse& p) {
  j = {{"t_center", p.t_center}, {"area", p.area}, {"width", p.width}};
}

void to_json(nlohmann::json& j, const PulseTrain& train) {
  j = {{"duration", train.duration},
       {"balanced", train.balanced},
       {"overlapping", train.overlapping},
       {"pulses", train.pulses}};
}

void from_json(const nlohmann::json& j, PulseTrain& train) {
  train = PulseTrain{};
  for (const auto& p : j.at("pulses")) {
    train.pulses.push_back(sech_pulse(p.at("area").get<double>(), p.at("width").get<double>(),
                                      p.at("t_center").get<double>()));
  }
  train.duration = j.at("duration").get<double>();
  train.balanced = j.value("balanced", false);
  train.overlapping = j.value("overlapping", false);
}

}  // namespace jtl
