#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "heislab/heis.hpp"

namespace heislab {

inline constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 28;

/// Uniform tensor grid over a box of R^m. Node i has multi-index
/// (i_0, ..., i_{m-1}) with axis 0 varying fastest.
class GridDomain {
 public:
  GridDomain(std::vector<double> origin, std::vector<double> spacing, std::vector<std::size_t> counts,
             std::size_t node_cap = kDefaultNodeCap);

  /// [lo, hi]^m with `count` nodes per axis.
  static GridDomain cube(int m, double lo, double hi, std::size_t count);

  int m() const { return static_cast<int>(origin_.size()); }
  std::size_t size() const { return size_; }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  double lower(int axis) const { return origin_[axis]; }
  double upper(int axis) const { return origin_[axis] + spacing_[axis] * static_cast<double>(counts_[axis] - 1); }

  std::size_t index_along(std::size_t node, int axis) const { return (node / strides_[axis]) % counts_[axis]; }
  std::size_t node_at(std::span<const std::size_t> multi) const;
  void coords(std::size_t node, std::span<double> out) const;
  std::vector<double> coords(std::size_t node) const;

  /// Interior along every axis (central differences available in all directions).
  bool is_interior(std::size_t node) const;

  bool operator==(const GridDomain&) const = default;

 private:
  std::vector<double> origin_;
  std::vector<double> spacing_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// A closed-form map R^m → R^{2n+1} with its Jacobian.
struct AnalyticMap {
  using Eval = std::function<void(std::span<const double> y, std::span<double> out)>;
  using Quotient =
      std::function<void(std::span<const double> z, double r, std::span<const double> y, std::span<double> out)>;

  std::string id;
  int m = 2;
  HeisDim dim{1};
  Eval value;
  Eval jacobian;  // row-major (2n+1) × m
  /// (f(z + r y) − f(z)) / r; additive constants cancel symbolically and
  /// linear maps return A y exactly. Empty means "difference of two value()
  /// calls divided by r".
  Quotient quotient;

  int components() const { return dim.ambient(); }
  std::vector<double> operator()(std::span<const double> y) const;
  Eigen::MatrixXd jacobian_at(std::span<const double> y) const;
  void quotient_at(std::span<const double> z, double r, std::span<const double> y, std::span<double> out) const;
};

std::vector<std::string> gallery_ids();
/// Throws InvalidArgument for unknown ids.
AnalyticMap gallery_map(std::string_view id);
/// y ↦ A y with A of shape (2n+1) × m.
AnalyticMap linear_map(const Eigen::MatrixXd& A, std::string id = "linear");
/// y ↦ f(y) + c.
AnalyticMap shifted(const AnalyticMap& f, std::vector<double> c);

/// f sampled at every node of a grid; values row-major (node, component).
struct SampledMap {
  GridDomain domain;
  HeisDim dim;
  std::vector<double> values;

  SampledMap(GridDomain domain, HeisDim dim, std::vector<double> values);

  int components() const { return dim.ambient(); }
  std::span<const double> value(std::size_t node) const {
    return {values.data() + node * components(), static_cast<std::size_t>(components())};
  }
};

/// A real-valued function sampled on a grid.
struct ScalarGrid {
  GridDomain domain;
  std::vector<double> values;

  ScalarGrid(GridDomain domain, std::vector<double> values);
};

/// Per-node 1-jets. Jacobian entries for node i, component c, axis k live at
/// jac[(i * d + c) * m + k]. Boundary nodes carry one-sided differences and
/// interior[i] == 0.
struct JetField {
  GridDomain domain;
  HeisDim dim;
  std::vector<double> values;
  std::vector<double> jac;
  std::vector<unsigned char> interior;

  int components() const { return dim.ambient(); }
  std::span<const double> value(std::size_t node) const {
    return {values.data() + node * components(), static_cast<std::size_t>(components())};
  }
  std::span<const double> jacobian(std::size_t node) const {
    const std::size_t w = static_cast<std::size_t>(components()) * domain.m();
    return {jac.data() + node * w, w};
  }
  Eigen::MatrixXd jacobian_matrix(std::size_t node) const;
  std::size_t interior_count() const;
};

SampledMap sample_analytic(const AnalyticMap& f, const GridDomain& domain);
SampledMap sample_analytic(std::string_view map_id, const GridDomain& domain);

/// Central differences on interior nodes, first-order one-sided at the boundary.
JetField jacobian_fd(const SampledMap& f);

/// Gradient of a scalar grid, same stencil as jacobian_fd; row-major (node, axis).
std::vector<double> gradient_fd(const ScalarGrid& g);

/// Γ = {axis_k, axis_l} (0-based, axis_k < axis_l) and a base node whose
/// entries along Γ are ignored.
struct SliceSpec {
  int axis_k = 0;
  int axis_l = 1;
  std::vector<std::size_t> base;
};

SampledMap slice(const SampledMap& f, const SliceSpec& s);
ScalarGrid slice(const ScalarGrid& u, const SliceSpec& s);
/// Γ-columns of the jets, restricted to the slice plane.
JetField slice(const JetField& j, const SliceSpec& s);

/// r^{-m} ∫_{B(z,r)} |f(y) − f(z)| dy with node-cell midpoint weights; cells
/// crossing the sphere are weighted by 4×-per-axis subsampling.
double lebesgue_point_error(const SampledMap& f, std::size_t node, double r);

namespace detail {

// Shared per-node stencil; used by both the OpenMP kernel and the serial reference.
inline void fd_node(const GridDomain& dom, std::span<const double> values, int d, std::size_t node,
                    double* out) {
  const int m = dom.m();
  for (int k = 0; k < m; ++k) {
    const std::size_t ik = dom.index_along(node, k);
    const std::size_t s = dom.stride(k);
    const std::size_t cnt = dom.counts()[k];
    const double h = dom.spacing()[k];
    std::size_t lo = node, hi = node;
    double denom = h;
    if (ik == 0) {
      hi = node + s;
    } else if (ik + 1 == cnt) {
      lo = node - s;
    } else {
      lo = node - s;
      hi = node + s;
      denom = 2.0 * h;
    }
    for (int c = 0; c < d; ++c) {
      out[c * m + k] = (values[hi * d + c] - values[lo * d + c]) / denom;
    }
  }
}

}  // namespace detail

}  // namespace heislab
