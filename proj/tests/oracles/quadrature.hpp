#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Tensor Gauss–Legendre (5 points) on an n×n polar grid of the unit disc;
// independent of the library's midpoint rule.
inline double disc_integral(const std::function<double(double, double)>& g, int cells = 64) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const double dr = 1.0 / cells, dt = 2.0 * std::numbers::pi / cells;
  double total = 0.0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
          const double r = (i + 0.5 + 0.5 * x[a]) * dr;
          const double t = (j + 0.5 + 0.5 * x[b]) * dt;
          total += w[a] * w[b] * 0.25 * dr * dt * r * g(r * std::cos(t), r * std::sin(t));
        }
  return total;
}

// Ratio e(h) / e(h/2) for an error model; ≈ 2^p for order-p methods.
inline double richardson_ratio(const std::function<double(double)>& err, double h) { return err(h) / err(h / 2); }

}  // namespace oracle
