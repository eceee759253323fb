#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// N(p⁻¹ q) for n = 1, straight from the group law.
inline double koranyi(const double* p, const double* q) {
  const double dx = q[0] - p[0], dy = q[1] - p[1];
  const double dt = q[2] - p[2] - (p[0] * q[1] - p[1] * q[0]);
  return std::pow((dx * dx + dy * dy) * (dx * dx + dy * dy) + dt * dt, 0.25);
}

// Greedy δ-net by exhaustive search over all centres (O(N · centres)).
inline std::size_t greedy_net(const std::vector<double>& pts, double delta) {
  std::vector<std::size_t> centres;
  for (std::size_t i = 0; i < pts.size() / 3; ++i) {
    bool covered = false;
    for (std::size_t c : centres) {
      if (koranyi(&pts[3 * c], &pts[3 * i]) <= delta) {
        covered = true;
        break;
      }
    }
    if (!covered) centres.push_back(i);
  }
  return centres.size();
}

}  // namespace oracle
