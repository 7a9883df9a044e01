#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stokesim {

/// Invalid argument or configuration value (CLI exit code 2).
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// Minimal interparticle distance dropped below four particle radii.
/// The dilute velocity expansions are only valid above this threshold,
/// so the simulation must halt rather than continue (CLI exit code 3).
class SeparationGuardError : public std::runtime_error {
  public:
    SeparationGuardError(double min_separation, double threshold, const std::string &context = {})
        : std::runtime_error("separation guard violated" + (context.empty() ? "" : " " + context) +
                             ": d_min = " + std::to_string(min_separation) +
                             " < 4*eps = " + std::to_string(threshold)),
          min_separation(min_separation), threshold(threshold) {}
    double min_separation;
    double threshold;
};

/// The effective-velocity fixed point stopped contracting, which signals
/// that the volume fraction is too large or the smoothing width too small
/// for the iteration to converge (CLI exit code 3).
class ContractionError : public std::runtime_error {
  public:
    ContractionError(std::string msg, std::vector<double> residuals)
        : std::runtime_error(std::move(msg)), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

/// Problem size exceeds what a solver is willing to handle.
class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace stokesim
