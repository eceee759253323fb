#include "heislab/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heislab/regression.hpp"

namespace heislab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Bilinear {
  std::array<std::size_t, 4> nodes;
  std::array<double, 4> weights;
};

Bilinear bilinear_stencil(const GridDomain& dom, std::span<const double> p) {
  std::array<std::size_t, 2> i{};
  std::array<double, 2> f{};
  for (int k = 0; k < 2; ++k) {
    const double s = (p[k] - dom.origin()[k]) / dom.spacing()[k];
    const double fl = std::floor(s);
    const double hi = static_cast<double>(dom.counts()[k] - 2);
    const double base = std::clamp(fl, 0.0, hi);
    i[k] = static_cast<std::size_t>(base);
    f[k] = s - base;
  }
  const std::size_t n00 = i[0] + i[1] * dom.stride(1);
  const std::size_t sx = dom.stride(0);
  const std::size_t sy = dom.stride(1);
  return {{n00, n00 + sx, n00 + sy, n00 + sx + sy},
          {(1 - f[0]) * (1 - f[1]), f[0] * (1 - f[1]), (1 - f[0]) * f[1], f[0] * f[1]}};
}

void require_radius(double r) {
  if (!(r > 0.0) || !(r < 1.0)) throw InvalidArgument("circle radius must lie in (0, 1)");
}

}  // namespace

// ---------------------------------------------------------------------------
// PlanarField

PlanarField PlanarField::analytic(AnalyticMap f, std::optional<Box> bounds) {
  if (f.m != 2) throw InvalidArgument("blow-up analysis needs a planar source (m = 2); got map '" + f.id + "'");
  return PlanarField(std::move(f), bounds);
}

PlanarField PlanarField::sampled(const SampledMap& f) {
  if (f.domain.m() != 2) throw InvalidArgument("blow-up analysis needs a planar source (m = 2); slice first");
  Box box{{f.domain.lower(0), f.domain.lower(1)}, {f.domain.upper(0), f.domain.upper(1)}};
  return PlanarField(Sampled{f, jacobian_fd(f)}, box);
}

HeisDim PlanarField::dim() const {
  return std::visit(
      [](const auto& impl) -> HeisDim {
        if constexpr (std::is_same_v<std::decay_t<decltype(impl)>, AnalyticMap>) {
          return impl.dim;
        } else {
          return impl.map.dim;
        }
      },
      impl_);
}

void PlanarField::value(std::span<const double> y, std::span<double> out) const {
  if (const auto* a = std::get_if<AnalyticMap>(&impl_)) {
    a->value(y, out);
    return;
  }
  const auto& s = std::get<Sampled>(impl_);
  const Bilinear st = bilinear_stencil(s.map.domain, y);
  const int d = s.map.components();
  for (int c = 0; c < d; ++c) {
    double v = 0.0;
    for (int q = 0; q < 4; ++q) v += st.weights[q] * s.map.values[st.nodes[q] * d + c];
    out[c] = v;
  }
}

void PlanarField::quotient(std::span<const double> z, double r, std::span<const double> y,
                           std::span<double> out) const {
  if (const auto* a = std::get_if<AnalyticMap>(&impl_)) {
    a->quotient_at(z, r, y, out);
    return;
  }
  const std::array<double, 2> p{z[0] + r * y[0], z[1] + r * y[1]};
  std::vector<double> base(components());
  value(p, out);
  value(z, base);
  for (int c = 0; c < components(); ++c) out[c] = (out[c] - base[c]) / r;
}

Eigen::MatrixXd PlanarField::jacobian(std::span<const double> z) const {
  if (const auto* a = std::get_if<AnalyticMap>(&impl_)) return a->jacobian_at(z);
  const auto& s = std::get<Sampled>(impl_);
  const Bilinear st = bilinear_stencil(s.map.domain, z);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(s.map.components(), 2);
  for (int q = 0; q < 4; ++q) J += st.weights[q] * s.jets.jacobian_matrix(st.nodes[q]);
  return J;
}

double PlanarField::interpolation_error(std::span<const double> y) const {
  const auto* s = std::get_if<Sampled>(&impl_);
  if (!s) return 0.0;
  const GridDomain& dom = s->map.domain;
  std::array<std::size_t, 2> near{};
  for (int k = 0; k < 2; ++k) {
    const double idx = std::round((y[k] - dom.origin()[k]) / dom.spacing()[k]);
    near[k] = static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(dom.counts()[k] - 1)));
  }
  const std::size_t node = dom.node_at(near);
  const std::vector<double> x = dom.coords(node);
  const int d = s->map.components();
  std::vector<double> bil(d);
  value(y, bil);
  const auto f0 = s->map.value(node);
  const auto J = s->jets.jacobian(node);
  double err2 = 0.0;
  for (int c = 0; c < d; ++c) {
    const double taylor = f0[c] + J[c * 2] * (y[0] - x[0]) + J[c * 2 + 1] * (y[1] - x[1]);
    err2 += (bil[c] - taylor) * (bil[c] - taylor);
  }
  return std::sqrt(err2);
}

bool PlanarField::contains_ball(std::span<const double> z, double r) const {
  if (!bounds_) return true;
  for (int k = 0; k < 2; ++k) {
    if (z[k] - r < bounds_->lo[k] || z[k] + r > bounds_->hi[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rescaling

RescaledMap::RescaledMap(const PlanarField& base, std::array<double, 2> center, double scale)
    : base_(&base), center_(center), scale_(scale) {}

void RescaledMap::value(std::span<const double> y, std::span<double> out) const {
  base_->quotient(center_, scale_, y, out);
}

std::vector<double> RescaledMap::operator()(std::span<const double> y) const {
  std::vector<double> out(base_->components());
  value(y, out);
  return out;
}

RescaledMap rescale(const PlanarField& f, std::array<double, 2> z, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("rescale: scale must be positive");
  if (!f.contains_ball(z, r)) throw DomainError("rescale: ball B(z, r) exits the domain");
  return RescaledMap(f, z, r);
}

double l1_blowup_error(const PlanarField& f, std::array<double, 2> z, double r, PolarQuadrature q) {
  if (q.radial < 1 || q.angular < 4) throw InvalidArgument("l1_blowup_error: quadrature too coarse");
  const RescaledMap u = rescale(f, z, r);
  const Eigen::MatrixXd A = f.jacobian(z);
  const int d = f.components();
  const double dr = 1.0 / q.radial;
  const double dt = kTwoPi / q.angular;
  std::vector<double> val(d);
  double total = 0.0;
  for (int i = 0; i < q.radial; ++i) {
    const double rad = (i + 0.5) * dr;
    double ring = 0.0;
    for (int j = 0; j < q.angular; ++j) {
      const double t = (j + 0.5) * dt;
      const std::array<double, 2> y{rad * std::cos(t), rad * std::sin(t)};
      u.value(y, val);
      double e2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double e = val[c] - (A(c, 0) * y[0] + A(c, 1) * y[1]);
        e2 += e * e;
      }
      ring += std::sqrt(e2);
    }
    total += ring * rad;
  }
  return total * dr * dt;
}

// ---------------------------------------------------------------------------
// Circles

CirclePath::CirclePath(std::array<double, 2> center, double radius, int nodes)
    : center_(center), radius_(radius), nodes_(nodes) {
  if (!(radius > 0.0)) throw InvalidArgument("CirclePath: radius must be positive");
  if (nodes < 8) throw InvalidArgument("CirclePath: at least 8 nodes are required");
}

double CirclePath::step() const { return kTwoPi / nodes_; }

std::array<double, 2> CirclePath::point(int k) const {
  const double t = -std::numbers::pi + step() * k;
  return {center_[0] + radius_ * std::cos(t), center_[1] + radius_ * std::sin(t)};
}

double oriented_circle_integral(std::span<const double> u, std::span<const double> v) {
  const std::size_t K = u.size();
  if (v.size() != K) throw InvalidArgument("oriented_circle_integral: u and v sample counts differ");
  if (K < 8) throw InvalidArgument("oriented_circle_integral: at least 8 nodes are required");
  double s = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double next = v[(k + 1) % K];
    const double prev = v[(k + K - 1) % K];
    s += u[k] * (next - prev);
  }
  return 0.5 * s;
}

double oriented_circle_integral(const std::function<double(double, double)>& u,
                                const std::function<double(double, double)>& v, const CirclePath& c) {
  std::vector<double> us(c.nodes()), vs(c.nodes());
  for (int k = 0; k < c.nodes(); ++k) {
    const auto p = c.point(k);
    us[k] = u(p[0], p[1]);
    vs[k] = v(p[0], p[1]);
  }
  return oriented_circle_integral(us, vs);
}

double circle_contact_form(const std::function<void(std::span<const double>, std::span<double>)>& u, int n,
                           const CirclePath& c) {
  const int d = 2 * n + 1;
  const int K = c.nodes();
  std::vector<double> comp(static_cast<std::size_t>(d) * K);  // component-major
  std::vector<double> val(d);
  for (int k = 0; k < K; ++k) {
    const auto p = c.point(k);
    u(p, val);
    for (int q = 0; q < d; ++q) comp[static_cast<std::size_t>(q) * K + k] = val[q];
  }
  auto column = [&](int q) { return std::span<const double>(comp.data() + static_cast<std::size_t>(q) * K, K); };
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    total += oriented_circle_integral(column(j), column(j + n)) - oriented_circle_integral(column(j + n), column(j));
  }
  return total;
}

CircleDefect contact_circle_defect(const PlanarField& f, std::array<double, 2> z, double rho, double r, int nodes) {
  require_radius(r);
  const RescaledMap u = rescale(f, z, rho);
  const CirclePath path({0.0, 0.0}, r, nodes);
  CircleDefect out;
  out.defect = circle_contact_form([&](std::span<const double> y, std::span<double> o) { u.value(y, o); },
                                   f.dim().n(), path);
  if (f.is_sampled()) {
    for (int k = 0; k < nodes; ++k) {
      const auto p = path.point(k);
      const std::array<double, 2> x{z[0] + rho * p[0], z[1] + rho * p[1]};
      out.interpolation_error = std::max(out.interpolation_error, f.interpolation_error(x) / rho);
    }
  }
  return out;
}

std::string to_string(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::Converged: return "Converged";
    case ConvergenceStatus::Exact: return "Exact";
    case ConvergenceStatus::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

std::vector<double> dyadic_schedule(double rho0, int levels) {
  if (!(rho0 > 0.0) || levels < 2) throw InvalidArgument("dyadic_schedule: need rho0 > 0 and at least 2 levels");
  std::vector<double> out(levels);
  for (int k = 0; k < levels; ++k) out[k] = std::ldexp(rho0, -k);
  return out;
}

double jacobian_wedge(const Eigen::MatrixXd& J) {
  if (J.cols() != 2 || J.rows() < 3 || J.rows() % 2 == 0) throw InvalidArgument("jacobian_wedge: need (2n+1) x 2");
  const auto n = J.rows() / 2;
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) s += J(j, 0) * J(j + n, 1) - J(j, 1) * J(j + n, 0);
  return s;
}

namespace {

WedgeEstimate analyze_estimates(std::vector<double> rhos, std::vector<double> est) {
  WedgeEstimate w;
  w.rhos = std::move(rhos);
  w.estimates = std::move(est);
  const std::size_t L = w.estimates.size();
  const double last = w.estimates.back();
  const double floor = 1e-12 * (1.0 + std::abs(last));
  const std::size_t first = L - 1 >= 5 ? L - 1 - 5 : 0;

  std::vector<double> lx, ly;
  std::vector<double> tail;
  for (std::size_t k = first; k + 1 < L; ++k) {
    const double dk = std::abs(w.estimates[k + 1] - w.estimates[k]);
    tail.push_back(dk);
    if (dk > floor) {
      lx.push_back(std::log(w.rhos[k]));
      ly.push_back(std::log(dk));
    }
  }
  if (lx.size() < 2) {
    w.status = ConvergenceStatus::Exact;
    w.slope = std::numeric_limits<double>::infinity();
    w.estimate = last;
    return w;
  }
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < tail.size(); ++k) {
    if (tail[k + 1] > 1.05 * tail[k] + floor) monotone = false;
  }
  w.slope = fit_line(lx, ly).slope;
  if (!monotone || !(w.slope > 0.0)) {
    w.status = ConvergenceStatus::Indeterminate;
    w.estimate = last;
    return w;
  }
  // e(ρ) ≈ e* + C ρ^p through the last two scales.
  const double p = w.slope;
  const double rp = std::pow(w.rhos[L - 2], p);
  const double rl = std::pow(w.rhos[L - 1], p);
  const double C = (w.estimates[L - 2] - last) / (rp - rl);
  w.estimate = last - C * rl;
  w.status = ConvergenceStatus::Converged;
  return w;
}

void require_schedule(std::span<const double> rhos) {
  if (rhos.size() < 2) throw InvalidArgument("rho schedule needs at least 2 scales");
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (!(rhos[k] > 0.0)) throw InvalidArgument("rho schedule must be positive");
    if (k > 0 && !(rhos[k] < rhos[k - 1])) throw InvalidArgument("rho schedule must be strictly decreasing");
  }
}

}  // namespace

WedgeEstimate wedge_from_circles(const PlanarField& f, std::array<double, 2> z, std::span<const double> rhos, double r,
                                 int nodes) {
  require_schedule(rhos);
  require_radius(r);
  std::vector<double> est(rhos.size());
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    est[k] = contact_circle_defect(f, z, rhos[k], r, nodes).defect / (kTwoPi * r * r);
  }
  return analyze_estimates({rhos.begin(), rhos.end()}, std::move(est));
}

BlowupReport blowup_report(const PlanarField& f, std::array<double, 2> z, const BlowupConfig& cfg) {
  const std::vector<double> rhos = dyadic_schedule(cfg.rho0, cfg.levels);
  if (cfg.radii.empty()) throw InvalidArgument("blowup_report: at least one radius is required");
  for (double r : cfg.radii) require_radius(r);
  if (!f.contains_ball(z, rhos.front())) throw DomainError("blowup_report: ball B(z, rho0) exits the domain");

  BlowupReport rep;
  rep.center = z;
  rep.analytic_wedge = jacobian_wedge(f.jacobian(z));
  const std::size_t R = cfg.radii.size();
  rep.rows.resize(rhos.size() * R);
  std::vector<double> l1(rhos.size());

  const auto total = static_cast<std::int64_t>(rhos.size() * (R + 1));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t task = 0; task < total; ++task) {
    const std::size_t k = static_cast<std::size_t>(task) / (R + 1);
    const std::size_t slot = static_cast<std::size_t>(task) % (R + 1);
    if (slot == R) {
      l1[k] = l1_blowup_error(f, z, rhos[k], cfg.quadrature);
      continue;
    }
    const double r = cfg.radii[slot];
    const CircleDefect cd = contact_circle_defect(f, z, rhos[k], r, cfg.nodes);
    BlowupRow& row = rep.rows[k * R + slot];
    row.rho = rhos[k];
    row.r = r;
    row.defect = cd.defect;
    row.estimate = cd.defect / (kTwoPi * r * r);
    row.interpolation_error = cd.interpolation_error;
  }
  for (std::size_t k = 0; k < rhos.size(); ++k)
    for (std::size_t s = 0; s < R; ++s) rep.rows[k * R + s].l1_error = l1[k];

  for (std::size_t s = 0; s < R; ++s) {
    std::vector<double> est(rhos.size());
    for (std::size_t k = 0; k < rhos.size(); ++k) est[k] = rep.rows[k * R + s].estimate;
    rep.per_radius.push_back(analyze_estimates(rhos, std::move(est)));
  }

  const std::size_t first = rhos.size() >= 5 ? rhos.size() - 5 : 0;
  std::vector<double> lx, ly;
  for (std::size_t k = first; k < rhos.size(); ++k) {
    if (l1[k] > 1e-13) {
      lx.push_back(std::log(rhos[k]));
      ly.push_back(std::log(l1[k]));
    }
  }
  if (lx.size() == rhos.size() - first && lx.size() >= 2) rep.l1_slope = fit_line(lx, ly).slope;
  return rep;
}

}  // namespace heislab
