#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace jtl {

/// Magnetic flux quantum h/2e (Wb).
inline constexpr double kFluxQuantum = 2.067833848e-15;

/// Phi0 / 2pi, the factor between junction phase and flux (Wb/rad).
inline constexpr double kReducedFlux = kFluxQuantum / (2.0 * std::numbers::pi);

/// Parameter outside its allowed set (bad config, non-positive field, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integration blew up or an analysis had too little data to work with.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jtl
