#pragma once

#include <span>
#include <string>
#include <vector>

#include "heislab/errors.hpp"

namespace heislab {

/// Dimension symbol of H^n; points live in R^{2n+1}.
class HeisDim {
 public:
  explicit HeisDim(int n);

  int n() const { return n_; }
  int ambient() const { return 2 * n_ + 1; }

  bool operator==(const HeisDim&) const = default;

 private:
  int n_;
};

/// A point of H^n in exponential coordinates (x_1..x_n, y_1..y_n, t).
/// Storage is contiguous so that coords() matches the layout of the
/// horizontal frame: x in [0,n), y in [n,2n), t at 2n.
class HPoint {
 public:
  HPoint(std::vector<double> x, std::vector<double> y, double t);

  static HPoint identity(HeisDim dim);
  static HPoint from_coords(std::span<const double> coords);

  HeisDim dim() const { return HeisDim(n_); }
  int n() const { return n_; }

  std::span<const double> x() const { return {c_.data(), static_cast<std::size_t>(n_)}; }
  std::span<const double> y() const { return {c_.data() + n_, static_cast<std::size_t>(n_)}; }
  double t() const { return c_.back(); }
  std::span<const double> coords() const { return c_; }

  bool operator==(const HPoint&) const = default;

 private:
  HPoint(int n, std::vector<double> coords) : n_(n), c_(std::move(coords)) {}

  int n_;
  std::vector<double> c_;
};

/// (x,y,t)·(x',y',t') = (x+x', y+y', t+t' + Σ_j (x_j y'_j − y_j x'_j)).
/// This is the law for which X_j = ∂x_j − y_j ∂t, Y_j = ∂y_j + x_j ∂t are
/// left-invariant.
HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint group_inv(const HPoint& p);

/// Anisotropic dilation (x,y,t) ↦ (rx, ry, r²t); a group automorphism.
HPoint dilate(double r, const HPoint& p);

enum class GaugeKind { Koranyi, CarnotCaratheodory, Euclidean };

/// Which distance realizes "d" in a computation. CarnotCaratheodory is only
/// available in H^1.
class GaugeChoice {
 public:
  GaugeChoice(GaugeKind kind, HeisDim dim);

  GaugeKind kind() const { return kind_; }
  HeisDim dim() const { return dim_; }

 private:
  GaugeKind kind_;
  HeisDim dim_;
};

GaugeKind parse_gauge_kind(const std::string& name);
std::string to_string(GaugeKind kind);

/// Korányi gauge N(p) = ((|x|²+|y|²)² + t²)^{1/4}.
double koranyi_norm(const HPoint& p);

/// d(p,q) under the chosen gauge; left-invariant for the homogeneous gauges.
double gauge_distance(const HPoint& p, const HPoint& q, const GaugeChoice& g);

/// Diagnostics of the geodesic shooting solve in H^1.
struct ShootingResult {
  double distance = 0.0;
  double theta = 0.0;  // total turning angle of the circular-arc geodesic
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
};

/// Solves for the length-minimizing horizontal curve from the identity to p
/// (n = 1). Geodesics are arcs of circles in the (x,y) plane parametrized by
/// the turning angle θ; the endpoint satisfies |t| / r² = (θ − sin θ) / (4 sin²(θ/2)),
/// solved by bracketing + bisection with secant refinement.
ShootingResult cc_shoot(const HPoint& p, double theta_tol = 1e-10, int max_iter = 200);

/// Carnot–Carathéodory distance from the identity (n = 1). Falls back to the
/// piecewise-constant control approximation if shooting fails to converge.
double cc_distance(const HPoint& p);

/// Carnot–Carathéodory distance between two points (n = 1), via left translation.
double cc_distance(const HPoint& p, const HPoint& q);

/// Length of the shortest member of a family of piecewise-constant horizontal
/// controls (`segments` straight pieces, constant turn per piece, `grid` turn
/// rates) that reaches p after rotation and dilation. Independent of the
/// closed-form geodesic; accurate to O(segments⁻²).
double cc_distance_polygonal(const HPoint& p, int segments = 64, int grid = 10000);

/// Left-invariant horizontal frame at p: X_i = e_i − y_i e_t, X_{n+i} = e_{n+i} + x_i e_t.
std::vector<std::vector<double>> horizontal_frame(const HPoint& p);

/// Coefficients of θ = dt − Σ_j (x_j dy_j − y_j dx_j) at p.
std::vector<double> contact_covector(const HPoint& p);

}  // namespace heislab
