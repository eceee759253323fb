#include "heislab/heis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace heislab {

namespace {

void require_same_dim(const HPoint& p, const HPoint& q) {
  if (p.n() != q.n()) {
    throw InvalidArgument("Heisenberg dimension mismatch: n=" + std::to_string(p.n()) +
                          " vs n=" + std::to_string(q.n()));
  }
}

// (θ − sin θ) / (4 sin²(θ/2)): ratio |t| / r² reached by the arc geodesic of
// turning angle θ.
double arc_ratio(double theta) {
  double num;
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    num = theta * t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 / 5040.0));
  } else {
    num = theta - std::sin(theta);
  }
  const double s = std::sin(0.5 * theta);
  return num / (4.0 * s * s);
}

double arc_length(double theta, double r) {
  if (theta == 0.0) return r;
  return theta * r / (2.0 * std::sin(0.5 * theta));
}

}  // namespace

HeisDim::HeisDim(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("Heisenberg dimension n must be >= 1, got " + std::to_string(n));
}

HPoint::HPoint(std::vector<double> x, std::vector<double> y, double t) : n_(static_cast<int>(x.size())) {
  if (x.size() != y.size()) throw InvalidArgument("HPoint: x and y blocks differ in length");
  HeisDim check(n_);
  c_.reserve(2 * x.size() + 1);
  c_.insert(c_.end(), x.begin(), x.end());
  c_.insert(c_.end(), y.begin(), y.end());
  c_.push_back(t);
  for (double v : c_) {
    if (!std::isfinite(v)) throw InvalidArgument("HPoint: non-finite coordinate");
  }
}

HPoint HPoint::identity(HeisDim dim) { return HPoint(dim.n(), std::vector<double>(dim.ambient(), 0.0)); }

HPoint HPoint::from_coords(std::span<const double> coords) {
  if (coords.size() < 3 || coords.size() % 2 == 0) {
    throw InvalidArgument("HPoint: coordinate count must be 2n+1, got " + std::to_string(coords.size()));
  }
  for (double v : coords) {
    if (!std::isfinite(v)) throw InvalidArgument("HPoint: non-finite coordinate");
  }
  return HPoint(static_cast<int>(coords.size() / 2), std::vector<double>(coords.begin(), coords.end()));
}

HPoint group_mul(const HPoint& p, const HPoint& q) {
  require_same_dim(p, q);
  const int n = p.n();
  const auto a = p.coords();
  const auto b = q.coords();
  std::vector<double> out(a.size());
  double twist = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] = a[j] + b[j];
    out[n + j] = a[n + j] + b[n + j];
    twist += a[j] * b[n + j] - a[n + j] * b[j];
  }
  out[2 * n] = a[2 * n] + b[2 * n] + twist;
  return HPoint::from_coords(out);
}

HPoint group_inv(const HPoint& p) {
  std::vector<double> out(p.coords().begin(), p.coords().end());
  for (double& v : out) v = -v;
  return HPoint::from_coords(out);
}

HPoint dilate(double r, const HPoint& p) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("dilate: scale must be positive and finite");
  std::vector<double> out(p.coords().begin(), p.coords().end());
  for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] *= r;
  out.back() *= r * r;
  return HPoint::from_coords(out);
}

GaugeChoice::GaugeChoice(GaugeKind kind, HeisDim dim) : kind_(kind), dim_(dim) {
  if (kind == GaugeKind::CarnotCaratheodory && dim.n() != 1) {
    throw InvalidArgument("Carnot-Caratheodory gauge is only implemented for n = 1");
  }
}

GaugeKind parse_gauge_kind(const std::string& name) {
  if (name == "koranyi") return GaugeKind::Koranyi;
  if (name == "cc") return GaugeKind::CarnotCaratheodory;
  if (name == "euclidean") return GaugeKind::Euclidean;
  throw InvalidArgument("unknown gauge '" + name + "' (expected koranyi, cc or euclidean)");
}

std::string to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::Koranyi: return "koranyi";
    case GaugeKind::CarnotCaratheodory: return "cc";
    case GaugeKind::Euclidean: return "euclidean";
  }
  return "unknown";
}

double koranyi_norm(const HPoint& p) {
  double h2 = 0.0;
  const auto c = p.coords();
  for (int i = 0; i < 2 * p.n(); ++i) h2 += c[i] * c[i];
  return std::sqrt(std::sqrt(h2 * h2 + p.t() * p.t()));
}

double gauge_distance(const HPoint& p, const HPoint& q, const GaugeChoice& g) {
  require_same_dim(p, q);
  if (p.n() != g.dim().n()) throw InvalidArgument("gauge_distance: gauge dimension does not match points");
  if (p == q) return 0.0;
  switch (g.kind()) {
    case GaugeKind::Koranyi: return koranyi_norm(group_mul(group_inv(p), q));
    case GaugeKind::CarnotCaratheodory: return cc_distance(p, q);
    case GaugeKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.coords().size(); ++i) {
        const double d = p.coords()[i] - q.coords()[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  throw InvalidArgument("gauge_distance: unsupported gauge");
}

ShootingResult cc_shoot(const HPoint& p, double theta_tol, int max_iter) {
  if (p.n() != 1) throw InvalidArgument("cc distance is only implemented for n = 1");
  const double r = std::hypot(p.x()[0], p.y()[0]);
  const double tau = std::abs(p.t());
  ShootingResult res;
  if (tau == 0.0) {
    res.distance = r;
    res.converged = true;
    return res;
  }
  if (r == 0.0) {
    res.theta = 2.0 * std::numbers::pi;
    res.distance = std::sqrt(2.0 * std::numbers::pi * tau);
    res.converged = true;
    return res;
  }

  const double target = tau / (r * r);
  const double two_pi = 2.0 * std::numbers::pi;
  double lo = 0.0;
  double eps = std::min(std::numbers::pi, std::sqrt(two_pi / target));
  double hi = two_pi - eps;
  int grow = 0;
  while (arc_ratio(hi) < target) {
    eps *= 0.5;
    hi = two_pi - eps;
    if (++grow > 80 || hi >= two_pi) {
      res.bracket_lo = lo;
      res.bracket_hi = hi;
      return res;
    }
  }

  double glo = -target;
  double ghi = arc_ratio(hi) - target;
  double theta = 0.5 * (lo + hi);
  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    const double width = hi - lo;
    // False-position step from the bracket ends; bisect when it stalls.
    double cand = hi - ghi * (hi - lo) / (ghi - glo);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    double gc = arc_ratio(cand) - target;
    if (gc == 0.0) {
      lo = hi = cand;
      theta = cand;
      break;
    }
    if (gc < 0.0) { lo = cand; glo = gc; } else { hi = cand; ghi = gc; }
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double gm = arc_ratio(mid) - target;
      if (gm < 0.0) { lo = mid; glo = gm; } else { hi = mid; ghi = gm; }
    }
    theta = 0.5 * (lo + hi);
    if (hi - lo <= theta_tol) break;
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.theta = theta;
  res.converged = (hi - lo) <= theta_tol;
  res.distance = arc_length(theta, r);
  return res;
}

double cc_distance(const HPoint& p) {
  if (p.n() != 1) throw InvalidArgument("cc distance is only implemented for n = 1");
  const auto c = p.coords();
  if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0) return 0.0;
  const ShootingResult res = cc_shoot(p);
  if (res.converged && std::isfinite(res.distance)) return res.distance;
  const double fallback = cc_distance_polygonal(p);
  if (!std::isfinite(fallback)) {
    std::ostringstream msg;
    msg << "cc_distance: shooting failed after " << res.iterations << " iterations, bracket ["
        << res.bracket_lo << ", " << res.bracket_hi << "], and the control fallback diverged";
    throw NumericalFailure(msg.str());
  }
  return fallback;
}

double cc_distance(const HPoint& p, const HPoint& q) {
  require_same_dim(p, q);
  if (p == q) return 0.0;
  return cc_distance(group_mul(group_inv(p), q));
}

double cc_distance_polygonal(const HPoint& p, int segments, int grid) {
  if (p.n() != 1) throw InvalidArgument("cc distance is only implemented for n = 1");
  if (segments < 4 || grid < 2) throw InvalidArgument("cc_distance_polygonal: need segments >= 4, grid >= 2");
  const double r = std::hypot(p.x()[0], p.y()[0]);
  const double tau = std::abs(p.t());
  if (r == 0.0 && tau == 0.0) return 0.0;

  // Each control sequence is traversed with unit total length; rotation about
  // the t-axis and dilation then map its endpoint (a, b, c) onto any target
  // with the same "shape angle" atan2(√c, |(a,b)|).
  const double seg = 1.0 / segments;
  std::vector<double> angle(grid), inv_size(grid);
  for (int i = 0; i < grid; ++i) {
    const double turn = (2.0 * std::numbers::pi / segments) * i / (grid - 1);
    double px = 0.0, py = 0.0, pt = 0.0;
    for (int k = 0; k < segments; ++k) {
      const double dx = seg * std::cos(k * turn);
      const double dy = seg * std::sin(k * turn);
      pt += px * dy - py * dx;
      px += dx;
      py += dy;
    }
    const double chord = std::hypot(px, py);
    const double height = std::sqrt(std::max(pt, 0.0));
    angle[i] = std::atan2(height, chord);
    inv_size[i] = 1.0 / std::hypot(chord, height);
  }

  const double target_angle = std::atan2(std::sqrt(tau), r);
  const double target_size = std::hypot(r, std::sqrt(tau));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < grid; ++i) {
    const double a0 = std::min(angle[i], angle[i + 1]);
    const double a1 = std::max(angle[i], angle[i + 1]);
    if (target_angle < a0 || target_angle > a1) continue;
    const double w = (a1 > a0) ? (target_angle - angle[i]) / (angle[i + 1] - angle[i]) : 0.0;
    best = std::min(best, target_size * ((1.0 - w) * inv_size[i] + w * inv_size[i + 1]));
  }
  return best;
}

std::vector<std::vector<double>> horizontal_frame(const HPoint& p) {
  const int n = p.n();
  const auto c = p.coords();
  std::vector<std::vector<double>> frame(2 * n, std::vector<double>(2 * n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    frame[i][i] = 1.0;
    frame[i][2 * n] = -c[n + i];
    frame[n + i][n + i] = 1.0;
    frame[n + i][2 * n] = c[i];
  }
  return frame;
}

std::vector<double> contact_covector(const HPoint& p) {
  const int n = p.n();
  const auto c = p.coords();
  std::vector<double> theta(2 * n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    theta[j] = c[n + j];   // + y_j dx_j
    theta[n + j] = -c[j];  // − x_j dy_j
  }
  theta[2 * n] = 1.0;
  return theta;
}

}  // namespace heislab
