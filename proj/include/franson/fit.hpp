#pragma once

#include <span>
#include <vector>

namespace franson {

/// Least-squares fit of y = offset + amplitude * cos(harmonic * x + phase).
struct SinusoidFit {
  bool ok = false;  ///< false when the normal equations are singular
  double offset = 0.0;
  double amplitude = 0.0;  ///< >= 0; the sign is folded into `phase`
  double phase = 0.0;      ///< in (-pi, pi]
  double cos_coeff = 0.0;  ///< amplitude * cos(phase)
  double sin_coeff = 0.0;  ///< -amplitude * sin(phase)
  double visibility = 0.0;
  double visibility_error = 0.0;
  double phase_error = 0.0;
  double cos_error = 0.0;
  double sin_error = 0.0;
  double residual_rms = 0.0;
  double maxmin_visibility = 0.0;  ///< (max - min) / (max + min) of the raw data
};

/// `sigma` holds per-point standard errors used to propagate uncertainty into
/// the fitted parameters (the fit itself is unweighted). Pass an empty span to
/// skip error propagation.
SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y,
                         std::span<const double> sigma = {}, int harmonic = 1);

/// `count` evenly spaced phases covering [start, start + 2pi).
std::vector<double> uniform_phase_grid(std::size_t count, double start = 0.0);

/// Throws ConfigError unless the grid has >= 8 strictly increasing points
/// spanning a full period.
void check_phase_grid(std::span<const double> grid);

/// `count` log-spaced values from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

}  // namespace franson
