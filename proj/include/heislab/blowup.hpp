#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "heislab/jets.hpp"

namespace heislab {

/// A map from a planar domain that can be evaluated off-grid: either a
/// closed-form map (optionally restricted to a box) or grid samples read
/// through bilinear interpolation.
class PlanarField {
 public:
  struct Box {
    std::array<double, 2> lo;
    std::array<double, 2> hi;
  };

  static PlanarField analytic(AnalyticMap f, std::optional<Box> bounds = std::nullopt);
  static PlanarField sampled(const SampledMap& f);

  HeisDim dim() const;
  int components() const { return dim().ambient(); }
  bool is_sampled() const { return std::holds_alternative<Sampled>(impl_); }
  const std::optional<Box>& bounds() const { return bounds_; }

  void value(std::span<const double> y, std::span<double> out) const;
  /// (f(z + r y) − f(z)) / r.
  void quotient(std::span<const double> z, double r, std::span<const double> y, std::span<double> out) const;
  /// Df at z: analytic, or the bilinear interpolant of the FD jets.
  Eigen::MatrixXd jacobian(std::span<const double> z) const;
  /// |bilinear value − first-order Taylor value from the nearest node| (0 if analytic).
  double interpolation_error(std::span<const double> y) const;

  bool contains_ball(std::span<const double> z, double r) const;

 private:
  struct Sampled {
    SampledMap map;
    JetField jets;
  };

  PlanarField(std::variant<AnalyticMap, Sampled> impl, std::optional<Box> bounds)
      : impl_(std::move(impl)), bounds_(bounds) {}

  std::variant<AnalyticMap, Sampled> impl_;
  std::optional<Box> bounds_;
};

/// f_{z,r}(y) = (f(z + r y) − f(z)) / r on the unit disc.
class RescaledMap {
 public:
  RescaledMap(const PlanarField& base, std::array<double, 2> center, double scale);

  void value(std::span<const double> y, std::span<double> out) const;
  std::vector<double> operator()(std::span<const double> y) const;

  const PlanarField& base() const { return *base_; }
  std::array<double, 2> center() const { return center_; }
  double scale() const { return scale_; }

 private:
  const PlanarField* base_;
  std::array<double, 2> center_;
  double scale_;
};

/// Checks the ball B(z, r) lies in the base domain; throws DomainError otherwise.
RescaledMap rescale(const PlanarField& f, std::array<double, 2> z, double r);

/// Midpoint rule in polar coordinates on the unit disc.
struct PolarQuadrature {
  int radial = 128;
  int angular = 256;
};

/// ∫_𝔹 |f_{z,r}(y) − Df(z)·y| dy.
double l1_blowup_error(const PlanarField& f, std::array<double, 2> z, double r, PolarQuadrature q = {});

/// ψ(t) = (x₁ + r cos t, x₂ + r sin t) sampled at t_k = −π + 2πk/K.
class CirclePath {
 public:
  CirclePath(std::array<double, 2> center, double radius, int nodes);

  std::array<double, 2> center() const { return center_; }
  double radius() const { return radius_; }
  int nodes() const { return nodes_; }
  double step() const;
  std::array<double, 2> point(int k) const;

 private:
  std::array<double, 2> center_;
  double radius_;
  int nodes_;
};

inline constexpr int kDefaultCircleNodes = 1 << 14;

/// ∮ u dv = ∫_{−π}^{π} (u∘ψ)(v∘ψ)' dt from K periodic samples; (v∘ψ)' by
/// centered differences, periodic trapezoid in t.
double oriented_circle_integral(std::span<const double> u, std::span<const double> v);
double oriented_circle_integral(const std::function<double(double, double)>& u,
                                const std::function<double(double, double)>& v, const CirclePath& c);

struct CircleDefect {
  double defect = 0.0;
  double interpolation_error = 0.0;  // max over circle nodes; 0 for analytic inputs
};

/// ∮_{∂B(0,r)} Σ_j (u^j du^{j+n} − u^{j+n} du^j) for u = f_{z,ρ}.
CircleDefect contact_circle_defect(const PlanarField& f, std::array<double, 2> z, double rho, double r,
                                   int nodes = kDefaultCircleNodes);

/// Σ_j (u^j du^{j+n} − u^{j+n} du^j) integrated over a circle for any planar map u.
double circle_contact_form(const std::function<void(std::span<const double>, std::span<double>)>& u, int n,
                           const CirclePath& c);

enum class ConvergenceStatus { Converged, Exact, Indeterminate };
std::string to_string(ConvergenceStatus s);

struct WedgeEstimate {
  std::vector<double> rhos;
  std::vector<double> estimates;  // defect / (2π r²) per ρ
  double estimate = 0.0;          // extrapolated to ρ → 0
  double slope = 0.0;             // order of |e_{k+1} − e_k| in ρ; +inf when Exact
  ConvergenceStatus status = ConvergenceStatus::Indeterminate;
};

/// ρ_k = ρ₀ 2^{−k}, k = 0..levels−1.
std::vector<double> dyadic_schedule(double rho0, int levels);

/// Circle-integral estimate of Σ_j det(∇f^j(z), ∇f^{j+n}(z)).
WedgeEstimate wedge_from_circles(const PlanarField& f, std::array<double, 2> z, std::span<const double> rhos,
                                 double r, int nodes = kDefaultCircleNodes);

/// Σ_j det(∇f^j, ∇f^{j+n}) for a (2n+1)×2 Jacobian.
double jacobian_wedge(const Eigen::MatrixXd& J);

struct BlowupRow {
  double rho = 0.0;
  double r = 0.0;
  double l1_error = 0.0;
  double defect = 0.0;
  double estimate = 0.0;
  double interpolation_error = 0.0;
};

struct BlowupConfig {
  double rho0 = 0.1;
  int levels = 9;
  std::vector<double> radii = {0.3, 0.5, 0.7};
  int nodes = kDefaultCircleNodes;
  PolarQuadrature quadrature{};
};

struct BlowupReport {
  std::array<double, 2> center{};
  std::vector<BlowupRow> rows;  // ρ-major, radii inner
  double analytic_wedge = 0.0;  // Σdet of Df(z) as seen by the field
  /// Slope of log l1_error vs log ρ on the last five scales; nullopt when
  /// every error is at roundoff level.
  std::optional<double> l1_slope;
  std::vector<WedgeEstimate> per_radius;
};

BlowupReport blowup_report(const PlanarField& f, std::array<double, 2> z, const BlowupConfig& cfg = {});

}  // namespace heislab
