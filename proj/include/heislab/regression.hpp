#pragma once

#include <span>

namespace heislab {

/// Ordinary least squares y ≈ slope·x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_stderr = 0.0;
  /// 95% two-sided Student-t half-width on the slope (0 with two points).
  double half_width = 0.0;
  int points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace heislab
