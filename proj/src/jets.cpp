#include "heislab/jets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "heislab/parallel.hpp"

namespace heislab {

// ---------------------------------------------------------------------------
// GridDomain

GridDomain::GridDomain(std::vector<double> origin, std::vector<double> spacing, std::vector<std::size_t> counts,
                       std::size_t node_cap)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), counts_(std::move(counts)) {
  const std::size_t m = origin_.size();
  if (m == 0) throw InvalidArgument("GridDomain: source dimension must be >= 1");
  if (spacing_.size() != m || counts_.size() != m) {
    throw InvalidArgument("GridDomain: origin, spacing and counts must have the same length");
  }
  strides_.resize(m);
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(origin_[k])) throw InvalidArgument("GridDomain: non-finite origin");
    if (!(spacing_[k] > 0.0) || !std::isfinite(spacing_[k])) {
      throw InvalidArgument("GridDomain: degenerate spacing on axis " + std::to_string(k + 1));
    }
    if (counts_[k] < 3) throw InvalidArgument("GridDomain: need at least 3 nodes per axis");
    strides_[k] = total;
    if (total > node_cap / counts_[k]) {
      throw InvalidArgument("GridDomain: node count exceeds the configured cap of " + std::to_string(node_cap));
    }
    total *= counts_[k];
  }
  size_ = total;
}

GridDomain GridDomain::cube(int m, double lo, double hi, std::size_t count) {
  if (m < 1) throw InvalidArgument("GridDomain::cube: m must be >= 1");
  if (count < 3 || !(hi > lo)) throw InvalidArgument("GridDomain::cube: need hi > lo and count >= 3");
  const double h = (hi - lo) / static_cast<double>(count - 1);
  return GridDomain(std::vector<double>(m, lo), std::vector<double>(m, h), std::vector<std::size_t>(m, count));
}

std::size_t GridDomain::node_at(std::span<const std::size_t> multi) const {
  if (multi.size() != origin_.size()) throw InvalidArgument("GridDomain::node_at: wrong multi-index length");
  std::size_t node = 0;
  for (std::size_t k = 0; k < multi.size(); ++k) {
    if (multi[k] >= counts_[k]) throw DomainError("GridDomain::node_at: index outside the lattice");
    node += multi[k] * strides_[k];
  }
  return node;
}

void GridDomain::coords(std::size_t node, std::span<double> out) const {
  for (int k = 0; k < m(); ++k) {
    out[k] = origin_[k] + spacing_[k] * static_cast<double>(index_along(node, k));
  }
}

std::vector<double> GridDomain::coords(std::size_t node) const {
  std::vector<double> out(origin_.size());
  coords(node, out);
  return out;
}

bool GridDomain::is_interior(std::size_t node) const {
  for (int k = 0; k < m(); ++k) {
    const std::size_t ik = index_along(node, k);
    if (ik == 0 || ik + 1 == counts_[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Analytic maps

std::vector<double> AnalyticMap::operator()(std::span<const double> y) const {
  std::vector<double> out(components());
  value(y, out);
  return out;
}

Eigen::MatrixXd AnalyticMap::jacobian_at(std::span<const double> y) const {
  std::vector<double> buf(static_cast<std::size_t>(components()) * m);
  jacobian(y, buf);
  Eigen::MatrixXd J(components(), m);
  for (int c = 0; c < components(); ++c)
    for (int k = 0; k < m; ++k) J(c, k) = buf[c * m + k];
  return J;
}

void AnalyticMap::quotient_at(std::span<const double> z, double r, std::span<const double> y,
                              std::span<double> out) const {
  if (quotient) {
    quotient(z, r, y, out);
    return;
  }
  std::array<double, 16> zy{};
  std::vector<double> heap;
  std::span<double> p;
  if (m <= 16) {
    p = std::span<double>(zy.data(), m);
  } else {
    heap.resize(m);
    p = heap;
  }
  for (int k = 0; k < m; ++k) p[k] = z[k] + r * y[k];
  std::vector<double> base(components());
  value(p, out);
  value(z, base);
  for (int c = 0; c < components(); ++c) out[c] = (out[c] - base[c]) / r;
}

namespace {

AnalyticMap make_map(std::string id, int m, int n, AnalyticMap::Eval value, AnalyticMap::Eval jacobian) {
  AnalyticMap f;
  f.id = std::move(id);
  f.m = m;
  f.dim = HeisDim(n);
  f.value = std::move(value);
  f.jacobian = std::move(jacobian);
  return f;
}

using Builder = AnalyticMap (*)();

const std::map<std::string, Builder, std::less<>>& registry() {
  static const std::map<std::string, Builder, std::less<>> reg = {
      {"horizontal-cylinder",
       [] {
         return make_map(
             "horizontal-cylinder", 2, 1,
             [](auto y, auto o) { o[0] = std::cos(y[0]); o[1] = std::sin(y[0]); o[2] = y[0]; },
             [](auto y, auto J) {
               J[0] = -std::sin(y[0]); J[1] = 0.0;
               J[2] = std::cos(y[0]);  J[3] = 0.0;
               J[4] = 1.0;             J[5] = 0.0;
             });
       }},
      {"vertical-graph",
       [] {
         AnalyticMap f = make_map(
             "vertical-graph", 2, 1, [](auto y, auto o) { o[0] = y[0]; o[1] = y[1]; o[2] = 0.0; },
             [](auto, auto J) { J[0] = 1; J[1] = 0; J[2] = 0; J[3] = 1; J[4] = 0; J[5] = 0; });
         f.quotient = [](auto, double, auto y, auto o) { o[0] = y[0]; o[1] = y[1]; o[2] = 0.0; };
         return f;
       }},
      {"id-embed",
       [] {
         AnalyticMap f = gallery_map("vertical-graph");
         f.id = "id-embed";
         return f;
       }},
      {"graph-xy",
       [] {
         return make_map(
             "graph-xy", 2, 1, [](auto y, auto o) { o[0] = y[0]; o[1] = y[1]; o[2] = y[0] * y[1]; },
             [](auto y, auto J) { J[0] = 1; J[1] = 0; J[2] = 0; J[3] = 1; J[4] = y[1]; J[5] = y[0]; });
       }},
      {"graph-minus-xy",
       [] {
         return make_map(
             "graph-minus-xy", 2, 1, [](auto y, auto o) { o[0] = y[0]; o[1] = y[1]; o[2] = -y[0] * y[1]; },
             [](auto y, auto J) { J[0] = 1; J[1] = 0; J[2] = 0; J[3] = 1; J[4] = -y[1]; J[5] = -y[0]; });
       }},
      {"quadratic-graph",
       [] {
         return make_map(
             "quadratic-graph", 2, 1, [](auto y, auto o) { o[0] = y[0]; o[1] = y[1]; o[2] = y[0] * y[0]; },
             [](auto y, auto J) { J[0] = 1; J[1] = 0; J[2] = 0; J[3] = 1; J[4] = 2 * y[0]; J[5] = 0; });
       }},
      {"radial-quadratic",
       [] {
         AnalyticMap f = make_map(
             "radial-quadratic", 2, 1,
             [](auto y, auto o) { o[0] = 0; o[1] = 0; o[2] = y[0] * y[0] + y[1] * y[1]; },
             [](auto y, auto J) { J[0] = 0; J[1] = 0; J[2] = 0; J[3] = 0; J[4] = 2 * y[0]; J[5] = 2 * y[1]; });
         f.quotient = [](auto z, double r, auto y, auto o) {
           o[0] = 0;
           o[1] = 0;
           o[2] = 2 * (z[0] * y[0] + z[1] * y[1]) + r * (y[0] * y[0] + y[1] * y[1]);
         };
         return f;
       }},
      {"quadratic-perturbation",
       [] {
         return make_map(
             "quadratic-perturbation", 2, 1,
             [](auto y, auto o) {
               o[0] = y[0] + 0.5 * y[1] * y[1];
               o[1] = y[1] - 0.25 * y[0] * y[0];
               o[2] = 0.5 * y[0] * y[1];
             },
             [](auto y, auto J) {
               J[0] = 1.0;         J[1] = y[1];
               J[2] = -0.5 * y[0]; J[3] = 1.0;
               J[4] = 0.5 * y[1];  J[5] = 0.5 * y[0];
             });
       }},
      {"twisted",
       [] {
         return make_map(
             "twisted", 2, 1,
             [](auto y, auto o) {
               o[0] = y[0] + 0.3 * std::sin(y[1]);
               o[1] = y[1] + 0.2 * y[0] * y[0];
               o[2] = std::exp(0.1 * y[0]) * std::cos(y[1]);
             },
             [](auto y, auto J) {
               J[0] = 1.0;        J[1] = 0.3 * std::cos(y[1]);
               J[2] = 0.4 * y[0]; J[3] = 1.0;
               J[4] = 0.1 * std::exp(0.1 * y[0]) * std::cos(y[1]);
               J[5] = -std::exp(0.1 * y[0]) * std::sin(y[1]);
             });
       }},
      {"horizontal-line",
       [] {
         Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 2);
         A(0, 0) = 1;
         return linear_map(A, "horizontal-line");
       }},
      {"rank1-linear",
       [] {
         Eigen::MatrixXd A(3, 2);
         A << 1, 0, 2, 0, 0, 0;
         return linear_map(A, "rank1-linear");
       }},
      {"horizontal-lift",
       [] {
         return make_map(
             "horizontal-lift", 2, 1,
             [](auto y, auto o) { o[0] = y[0]; o[1] = y[0] * y[0]; o[2] = y[0] * y[0] * y[0] / 3.0; },
             [](auto y, auto J) { J[0] = 1; J[1] = 0; J[2] = 2 * y[0]; J[3] = 0; J[4] = y[0] * y[0]; J[5] = 0; });
       }},
      {"constant",
       [] {
         AnalyticMap f = make_map(
             "constant", 2, 1, [](auto, auto o) { o[0] = 1.0; o[1] = 2.0; o[2] = 3.0; },
             [](auto, auto J) { std::fill(J.begin(), J.end(), 0.0); });
         f.quotient = [](auto, double, auto, auto o) { std::fill(o.begin(), o.end(), 0.0); };
         return f;
       }},
      {"vertical-plane",
       [] {
         Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 2);
         A(0, 0) = 1;
         A(2, 1) = 1;
         return linear_map(A, "vertical-plane");
       }},
      {"horizontal-segment",
       [] {
         Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 1);
         A(0, 0) = 1;
         return linear_map(A, "horizontal-segment");
       }},
      {"vertical-segment",
       [] {
         Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 1);
         A(2, 0) = 1;
         return linear_map(A, "vertical-segment");
       }},
      {"lagrangian-h2",
       [] {
         // (y1, y2, y1² + y2, y1, y1³/3): (f³, f⁴) is the gradient of y1³/3 + y1 y2,
         // so the wedge vanishes and the contact equation holds exactly.
         return make_map(
             "lagrangian-h2", 2, 2,
             [](auto y, auto o) {
               o[0] = y[0]; o[1] = y[1]; o[2] = y[0] * y[0] + y[1]; o[3] = y[0]; o[4] = y[0] * y[0] * y[0] / 3.0;
             },
             [](auto y, auto J) {
               J[0] = 1;        J[1] = 0;
               J[2] = 0;        J[3] = 1;
               J[4] = 2 * y[0]; J[5] = 1;
               J[6] = 1;        J[7] = 0;
               J[8] = y[0] * y[0]; J[9] = 0;
             });
       }},
      {"lagrangian-h2-m3",
       [] {
         return make_map(
             "lagrangian-h2-m3", 3, 2,
             [](auto y, auto o) {
               o[0] = y[0]; o[1] = y[1]; o[2] = y[0] * y[0] + y[1]; o[3] = y[0]; o[4] = y[0] * y[0] * y[0] / 3.0;
             },
             [](auto y, auto J) {
               std::fill(J.begin(), J.end(), 0.0);
               J[0] = 1;
               J[4] = 1;
               J[6] = 2 * y[0]; J[7] = 1;
               J[9] = 1;
               J[12] = y[0] * y[0];
             });
       }},
      {"vertical-h2-m3",
       [] {
         Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5, 3);
         A(0, 0) = 1;
         A(1, 1) = 1;
         A(2, 2) = 1;
         return linear_map(A, "vertical-h2-m3");
       }},
  };
  return reg;
}

}  // namespace

std::vector<std::string> gallery_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

AnalyticMap gallery_map(std::string_view id) {
  const auto& reg = registry();
  const auto it = reg.find(id);
  if (it == reg.end()) throw InvalidArgument("unknown gallery map '" + std::string(id) + "'");
  return it->second();
}

AnalyticMap linear_map(const Eigen::MatrixXd& A, std::string id) {
  if (A.rows() < 3 || A.rows() % 2 == 0 || A.cols() < 1) {
    throw InvalidArgument("linear_map: matrix must be (2n+1) x m");
  }
  const int d = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  auto apply = [A, d, m](std::span<const double> y, std::span<double> o) {
    for (int c = 0; c < d; ++c) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += A(c, k) * y[k];
      o[c] = s;
    }
  };
  AnalyticMap f;
  f.id = std::move(id);
  f.m = m;
  f.dim = HeisDim((d - 1) / 2);
  f.value = apply;
  f.jacobian = [A, d, m](std::span<const double>, std::span<double> J) {
    for (int c = 0; c < d; ++c)
      for (int k = 0; k < m; ++k) J[c * m + k] = A(c, k);
  };
  f.quotient = [apply](std::span<const double>, double, std::span<const double> y, std::span<double> o) {
    apply(y, o);
  };
  return f;
}

AnalyticMap shifted(const AnalyticMap& f, std::vector<double> c) {
  if (static_cast<int>(c.size()) != f.components()) throw InvalidArgument("shifted: constant has wrong length");
  AnalyticMap g = f;
  g.id = f.id + "+const";
  g.value = [base = f.value, c](std::span<const double> y, std::span<double> o) {
    base(y, o);
    for (std::size_t i = 0; i < c.size(); ++i) o[i] += c[i];
  };
  g.quotient = [f](std::span<const double> z, double r, std::span<const double> y, std::span<double> o) {
    f.quotient_at(z, r, y, o);
  };
  return g;
}

// ---------------------------------------------------------------------------
// Sampled data

SampledMap::SampledMap(GridDomain domain_, HeisDim dim_, std::vector<double> values_)
    : domain(std::move(domain_)), dim(dim_), values(std::move(values_)) {
  if (values.size() != domain.size() * static_cast<std::size_t>(dim.ambient())) {
    throw InvalidArgument("SampledMap: value array length does not match node count");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("SampledMap: non-finite value");
  }
}

ScalarGrid::ScalarGrid(GridDomain domain_, std::vector<double> values_)
    : domain(std::move(domain_)), values(std::move(values_)) {
  if (values.size() != domain.size()) throw InvalidArgument("ScalarGrid: value array length does not match node count");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("ScalarGrid: non-finite value");
  }
}

Eigen::MatrixXd JetField::jacobian_matrix(std::size_t node) const {
  const int d = components();
  const int m = domain.m();
  const auto J = jacobian(node);
  Eigen::MatrixXd M(d, m);
  for (int c = 0; c < d; ++c)
    for (int k = 0; k < m; ++k) M(c, k) = J[c * m + k];
  return M;
}

std::size_t JetField::interior_count() const {
  return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), static_cast<unsigned char>(1)));
}

SampledMap sample_analytic(const AnalyticMap& f, const GridDomain& domain) {
  if (f.m != domain.m()) {
    throw InvalidArgument("sample_analytic: map '" + f.id + "' has source dimension " + std::to_string(f.m) +
                          " but the grid has m=" + std::to_string(domain.m()));
  }
  const int d = f.components();
  const int m = domain.m();
  std::vector<double> values(domain.size() * d);
  const auto n = static_cast<std::int64_t>(domain.size());
#pragma omp parallel
  {
    std::vector<double> y(m);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      domain.coords(static_cast<std::size_t>(i), y);
      f.value(y, std::span<double>(values.data() + i * d, d));
    }
  }
  return SampledMap(domain, f.dim, std::move(values));
}

SampledMap sample_analytic(std::string_view map_id, const GridDomain& domain) {
  return sample_analytic(gallery_map(map_id), domain);
}

JetField jacobian_fd(const SampledMap& f) {
  const GridDomain& dom = f.domain;
  const int d = f.components();
  const int m = dom.m();
  JetField j{dom, f.dim, f.values, std::vector<double>(dom.size() * d * m), std::vector<unsigned char>(dom.size())};
  const auto n = static_cast<std::int64_t>(dom.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto node = static_cast<std::size_t>(i);
    detail::fd_node(dom, f.values, d, node, j.jac.data() + node * d * m);
    j.interior[node] = dom.is_interior(node) ? 1 : 0;
  }
  return j;
}

std::vector<double> gradient_fd(const ScalarGrid& g) {
  const int m = g.domain.m();
  std::vector<double> grad(g.domain.size() * m);
  const auto n = static_cast<std::int64_t>(g.domain.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    detail::fd_node(g.domain, g.values, 1, static_cast<std::size_t>(i), grad.data() + i * m);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Slicing

namespace {

struct SlicePlan {
  GridDomain plane;
  std::size_t base_node;
  std::size_t stride_k;
  std::size_t stride_l;
};

SlicePlan plan_slice(const GridDomain& dom, const SliceSpec& s) {
  const int m = dom.m();
  if (m < 2) throw InvalidArgument("slice: source dimension must be >= 2");
  if (s.axis_k < 0 || s.axis_l >= m || s.axis_k >= s.axis_l) {
    throw InvalidArgument("slice: need 0 <= axis_k < axis_l < m");
  }
  if (static_cast<int>(s.base.size()) != m) throw InvalidArgument("slice: base multi-index must have length m");
  std::vector<std::size_t> base = s.base;
  base[s.axis_k] = 0;
  base[s.axis_l] = 0;
  for (int a = 0; a < m; ++a) {
    if (base[a] >= dom.counts()[a]) throw DomainError("slice: base node outside the complementary lattice");
  }
  GridDomain plane({dom.origin()[s.axis_k], dom.origin()[s.axis_l]},
                   {dom.spacing()[s.axis_k], dom.spacing()[s.axis_l]},
                   {dom.counts()[s.axis_k], dom.counts()[s.axis_l]});
  return {std::move(plane), dom.node_at(base), dom.stride(s.axis_k), dom.stride(s.axis_l)};
}

template <class Copy>
void for_each_slice_node(const SlicePlan& p, Copy&& copy) {
  const std::size_t ck = p.plane.counts()[0];
  const std::size_t cl = p.plane.counts()[1];
  for (std::size_t b = 0; b < cl; ++b)
    for (std::size_t a = 0; a < ck; ++a) copy(a + b * ck, p.base_node + a * p.stride_k + b * p.stride_l);
}

}  // namespace

SampledMap slice(const SampledMap& f, const SliceSpec& s) {
  const SlicePlan p = plan_slice(f.domain, s);
  const int d = f.components();
  std::vector<double> values(p.plane.size() * d);
  for_each_slice_node(p, [&](std::size_t dst, std::size_t src) {
    std::copy_n(f.values.begin() + src * d, d, values.begin() + dst * d);
  });
  return SampledMap(p.plane, f.dim, std::move(values));
}

ScalarGrid slice(const ScalarGrid& u, const SliceSpec& s) {
  const SlicePlan p = plan_slice(u.domain, s);
  std::vector<double> values(p.plane.size());
  for_each_slice_node(p, [&](std::size_t dst, std::size_t src) { values[dst] = u.values[src]; });
  return ScalarGrid(p.plane, std::move(values));
}

JetField slice(const JetField& j, const SliceSpec& s) {
  const SlicePlan p = plan_slice(j.domain, s);
  const int d = j.components();
  const int m = j.domain.m();
  JetField out{p.plane, j.dim, std::vector<double>(p.plane.size() * d), std::vector<double>(p.plane.size() * d * 2),
               std::vector<unsigned char>(p.plane.size())};
  for_each_slice_node(p, [&](std::size_t dst, std::size_t src) {
    std::copy_n(j.values.begin() + src * d, d, out.values.begin() + dst * d);
    for (int c = 0; c < d; ++c) {
      out.jac[(dst * d + c) * 2 + 0] = j.jac[(src * d + c) * m + s.axis_k];
      out.jac[(dst * d + c) * 2 + 1] = j.jac[(src * d + c) * m + s.axis_l];
    }
    out.interior[dst] = j.interior[src];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Lebesgue points

double lebesgue_point_error(const SampledMap& f, std::size_t node, double r) {
  const GridDomain& dom = f.domain;
  const int m = dom.m();
  if (!(r > 0.0)) throw InvalidArgument("lebesgue_point_error: radius must be positive");
  if (node >= dom.size()) throw DomainError("lebesgue_point_error: node outside the grid");
  const std::vector<double> z = dom.coords(node);
  for (int k = 0; k < m; ++k) {
    if (z[k] - r < dom.lower(k) || z[k] + r > dom.upper(k)) {
      throw DomainError("lebesgue_point_error: ball exits the domain along axis " + std::to_string(k + 1));
    }
  }
  const int d = f.components();
  const auto fz = f.value(node);

  // Node range covering the ball.
  std::vector<std::size_t> lo(m), hi(m);
  double cell_volume = 1.0;
  for (int k = 0; k < m; ++k) {
    const double h = dom.spacing()[k];
    lo[k] = static_cast<std::size_t>(std::max(0.0, std::floor((z[k] - r - dom.lower(k)) / h)));
    hi[k] = std::min(dom.counts()[k] - 1, static_cast<std::size_t>(std::ceil((z[k] + r - dom.lower(k)) / h)));
    cell_volume *= h;
  }

  static constexpr std::array<double, 4> kSub = {-0.375, -0.125, 0.125, 0.375};
  std::size_t sub_total = 1;
  for (int k = 0; k < m; ++k) sub_total *= kSub.size();

  std::vector<std::size_t> idx = lo;
  std::vector<double> x(m);
  double integral = 0.0;
  while (true) {
    std::size_t nd = 0;
    for (int k = 0; k < m; ++k) nd += idx[k] * dom.stride(k);
    dom.coords(nd, x);

    // Nearest and farthest distance from z to the node cell.
    double near2 = 0.0, far2 = 0.0;
    for (int k = 0; k < m; ++k) {
      const double half = 0.5 * dom.spacing()[k];
      const double dlo = x[k] - half - z[k];
      const double dhi = x[k] + half - z[k];
      const double nearest = (dlo > 0.0) ? dlo : (dhi < 0.0 ? -dhi : 0.0);
      const double farthest = std::max(std::abs(dlo), std::abs(dhi));
      near2 += nearest * nearest;
      far2 += farthest * farthest;
    }
    double weight = 0.0;
    if (far2 <= r * r) {
      weight = 1.0;
    } else if (near2 < r * r) {
      std::size_t inside = 0;
      for (std::size_t s = 0; s < sub_total; ++s) {
        std::size_t rem = s;
        double d2 = 0.0;
        for (int k = 0; k < m; ++k) {
          const double off = kSub[rem % kSub.size()] * dom.spacing()[k];
          rem /= kSub.size();
          const double dk = x[k] + off - z[k];
          d2 += dk * dk;
        }
        if (d2 <= r * r) ++inside;
      }
      weight = static_cast<double>(inside) / static_cast<double>(sub_total);
    }
    if (weight > 0.0) {
      const auto fy = f.value(nd);
      double diff2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double dc = fy[c] - fz[c];
        diff2 += dc * dc;
      }
      integral += weight * std::sqrt(diff2);
    }

    int k = 0;
    while (k < m) {
      if (idx[k] < hi[k]) {
        ++idx[k];
        break;
      }
      idx[k] = lo[k];
      ++k;
    }
    if (k == m) break;
  }
  return integral * cell_volume / std::pow(r, m);
}

}  // namespace heislab
