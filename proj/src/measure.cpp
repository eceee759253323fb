#include "heislab/measure.hpp"

#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "heislab/regression.hpp"

namespace heislab {

// ---------------------------------------------------------------------------
// Point sources

PointCloud::PointCloud(HeisDim dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  const auto d = static_cast<std::size_t>(dim_.ambient());
  if (coords_.empty()) throw InvalidArgument("PointCloud: empty cloud");
  if (coords_.size() % d != 0) throw InvalidArgument("PointCloud: coordinate count is not a multiple of 2n+1");
  if (!weights_.empty() && weights_.size() != size()) throw InvalidArgument("PointCloud: one weight per point");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw InvalidArgument("PointCloud: non-finite coordinate");
  }
}

PointCloud PointCloud::from_points(const std::vector<HPoint>& pts) {
  if (pts.empty()) throw InvalidArgument("PointCloud::from_points: empty point list");
  const HeisDim dim(pts.front().n());
  std::vector<double> c;
  c.reserve(pts.size() * dim.ambient());
  for (const auto& p : pts) {
    if (p.n() != dim.n()) throw InvalidArgument("PointCloud::from_points: mixed dimensions");
    const auto x = p.coords();
    c.insert(c.end(), x.begin(), x.end());
  }
  return PointCloud(dim, std::move(c));
}

void PointCloud::fill(std::size_t i, std::span<double> out) const {
  const auto src = at(i);
  std::copy(src.begin(), src.end(), out.begin());
}

PointCloud cloud_from_map(const SampledMap& f) {
  const GridDomain& dom = f.domain;
  double vol = 1.0;
  for (double h : dom.spacing()) vol *= h;
  return PointCloud(f.dim, f.values, std::vector<double>(dom.size(), vol));
}

MapImageCloud::MapImageCloud(AnalyticMap f, GridDomain grid) : f_(std::move(f)), grid_(std::move(grid)) {
  if (grid_.m() != f_.m) throw InvalidArgument("MapImageCloud: grid dimension differs from the map's source dimension");
  if (f_.m > 16) throw InvalidArgument("MapImageCloud: source dimension above 16 is not supported");
}

void MapImageCloud::fill(std::size_t i, std::span<double> out) const {
  std::array<double, 16> y{};
  const std::span<double> ys(y.data(), static_cast<std::size_t>(grid_.m()));
  grid_.coords(i, ys);
  f_.value(ys, out);
}

// ---------------------------------------------------------------------------
// Box counting

namespace {

constexpr std::uint64_t kBitsPerPass = std::uint64_t{1} << 32;

struct ScalePlan {
  std::vector<double> side;
  std::vector<std::int64_t> lo;
  std::vector<std::uint64_t> extent;
  std::uint64_t cells = 0;  // 0 when the bounding box is too large for a bitmap
};

std::vector<double> box_sides(const BoxScale& s, int d) {
  if (!(s.delta > 0.0) || !std::isfinite(s.delta)) throw InvalidArgument("box scale must be positive and finite");
  std::vector<double> side(d, s.delta);
  if (s.gauge != GaugeKind::Euclidean) side[d - 1] = s.delta * s.delta;
  return side;
}

std::int64_t box_index(double c, double o, double side) {
  const double q = std::floor((c - o) / side);
  if (!(std::abs(q) < 9.0e18)) throw InvalidArgument("box scale too small for the coordinate range");
  return static_cast<std::int64_t>(q);
}

}  // namespace

namespace detail {

std::vector<std::size_t> count_boxes_impl(std::size_t points, int d,
                                          const std::function<void(std::size_t, std::span<double>)>& fill,
                                          std::span<const BoxScale> scales, std::span<const double> origin) {
  if (!origin.empty() && static_cast<int>(origin.size()) != d) throw InvalidArgument("box origin has wrong dimension");
  std::vector<double> o(d, 0.0);
  if (!origin.empty()) std::copy(origin.begin(), origin.end(), o.begin());
  for (const auto& s : scales) box_sides(s, d);

  std::vector<std::size_t> result(scales.size(), 0);
  if (points == 0 || scales.empty()) return result;

  // Pass 1: bounding box. min/max are order independent, so the result does
  // not depend on the thread count.
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  bool finite = true;
  const auto N = static_cast<std::int64_t>(points);
#pragma omp parallel
  {
    std::vector<double> p(d), tlo(d, std::numeric_limits<double>::infinity()),
        thi(d, -std::numeric_limits<double>::infinity());
    bool tfinite = true;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < N; ++i) {
      fill(static_cast<std::size_t>(i), p);
      for (int k = 0; k < d; ++k) {
        if (!std::isfinite(p[k])) tfinite = false;
        tlo[k] = std::min(tlo[k], p[k]);
        thi[k] = std::max(thi[k], p[k]);
      }
    }
#pragma omp critical(heislab_bbox)
    {
      finite = finite && tfinite;
      for (int k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], tlo[k]);
        hi[k] = std::max(hi[k], thi[k]);
      }
    }
  }
  if (!finite) throw InvalidArgument("point cloud contains non-finite coordinates");

  std::vector<ScalePlan> plans(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    ScalePlan& pl = plans[s];
    pl.side = box_sides(scales[s], d);
    double cells = 1.0;
    for (int k = 0; k < d; ++k) {
      const std::int64_t a = box_index(lo[k], o[k], pl.side[k]);
      const std::int64_t b = box_index(hi[k], o[k], pl.side[k]);
      pl.lo.push_back(a);
      pl.extent.push_back(static_cast<std::uint64_t>(b - a) + 1);
      cells *= static_cast<double>(b - a) + 1.0;
    }
    if (cells <= static_cast<double>(kBitsPerPass)) pl.cells = static_cast<std::uint64_t>(cells);
  }

  // Bitmap passes: occupied cells of the bounding box, grouped so that one
  // pass never holds more than kBitsPerPass bits.
  std::size_t next = 0;
  while (next < scales.size()) {
    std::vector<std::size_t> batch;
    std::uint64_t bits = 0;
    for (; next < scales.size(); ++next) {
      if (plans[next].cells == 0) continue;
      if (!batch.empty() && bits + plans[next].cells > kBitsPerPass) break;
      batch.push_back(next);
      bits += plans[next].cells;
    }
    if (batch.empty()) break;
    std::vector<std::vector<std::uint64_t>> maps;
    for (std::size_t s : batch) maps.emplace_back((plans[s].cells + 63) / 64, 0);

#pragma omp parallel
    {
      std::vector<double> p(d);
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < N; ++i) {
        fill(static_cast<std::size_t>(i), p);
        for (std::size_t b = 0; b < batch.size(); ++b) {
          const ScalePlan& pl = plans[batch[b]];
          std::uint64_t lin = 0;
          for (int k = d - 1; k >= 0; --k) {
            const auto idx = static_cast<std::uint64_t>(box_index(p[k], o[k], pl.side[k]) - pl.lo[k]);
            lin = lin * pl.extent[k] + idx;
          }
          std::atomic_ref<std::uint64_t> word(maps[b][lin / 64]);
          word.fetch_or(std::uint64_t{1} << (lin % 64), std::memory_order_relaxed);
        }
      }
    }
    for (std::size_t b = 0; b < batch.size(); ++b) {
      std::size_t c = 0;
      for (std::uint64_t w : maps[b]) c += static_cast<std::size_t>(std::popcount(w));
      result[batch[b]] = c;
    }
  }

  // Scales whose bounding box is too fine for a bitmap: sort the box keys.
  for (std::size_t s = 0; s < scales.size(); ++s) {
    if (plans[s].cells != 0) continue;
    const ScalePlan& pl = plans[s];
    std::vector<std::int64_t> keys(points * d);
#pragma omp parallel
    {
      std::vector<double> p(d);
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < N; ++i) {
        fill(static_cast<std::size_t>(i), p);
        for (int k = 0; k < d; ++k) keys[static_cast<std::size_t>(i) * d + k] = box_index(p[k], o[k], pl.side[k]);
      }
    }
    std::vector<std::size_t> order(points);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::span<const std::int64_t>(keys.data() + i * d, d); };
    auto less = [&](std::size_t a, std::size_t b) {
      const auto ka = key(a), kb = key(b);
      return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t c = 1;
    for (std::size_t i = 1; i < points; ++i) {
      if (less(order[i - 1], order[i])) ++c;
    }
    result[s] = c;
  }
  return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fits and checks

void require_dimension_schedule(std::span<const double> scales) {
  if (scales.size() < 4) throw InvalidArgument("dimension estimate needs at least 4 scales");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("scales must be positive and finite");
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (std::log10(hi / lo) < 1.5 - 1e-12) {
    std::ostringstream msg;
    msg << "scale schedule spans " << std::log10(hi / lo) << " decades; at least 1.5 are required";
    throw InvalidArgument(msg.str());
  }
}

void require_resolved(std::size_t points, std::span<const double> scales, std::span<const std::size_t> counts) {
  if (counts.empty()) return;
  if (std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return c == counts.front(); })) return;
  const auto finest = static_cast<std::size_t>(std::min_element(scales.begin(), scales.end()) - scales.begin());
  const std::size_t n_fine = counts[finest];
  if (points < 4 * n_fine) {
    std::ostringstream msg;
    msg << "cloud under-resolved at delta = " << scales[finest] << ": " << points << " points in " << n_fine
        << " occupied boxes (mean occupancy " << static_cast<double>(points) / static_cast<double>(n_fine)
        << ", need >= 4); refine the sample or drop the finest scales";
    throw UnderResolved(msg.str());
  }
}

DimensionFit fit_dimension(GaugeKind gauge, std::span<const double> scales, std::span<const std::size_t> counts) {
  require_dimension_schedule(scales);
  if (counts.size() != scales.size()) throw InvalidArgument("fit_dimension: one count per scale");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (counts[i] == 0) throw InvalidArgument("fit_dimension: empty cover");
    x.push_back(-std::log(scales[i]));
    y.push_back(std::log(static_cast<double>(counts[i])));
  }
  const LineFit lf = fit_line(x, y);
  DimensionFit out;
  out.gauge = gauge;
  out.scales.assign(scales.begin(), scales.end());
  out.counts.assign(counts.begin(), counts.end());
  out.slope = lf.slope;
  out.intercept = lf.intercept;
  out.residual = lf.residual_rms;
  out.half_width = lf.half_width;
  return out;
}

// ---------------------------------------------------------------------------
// Greedy δ-net

namespace {

std::uint64_t mix(std::uint64_t h, std::int64_t v) {
  h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

double koranyi_between(std::span<const double> c, std::span<const double> p, int n) {
  double h2 = 0.0, tw = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dx = p[j] - c[j];
    const double dy = p[j + n] - c[j + n];
    h2 += dx * dx + dy * dy;
    tw += c[j] * p[j + n] - c[j + n] * p[j];
  }
  const double dt = p[2 * n] - c[2 * n] - tw;
  return std::pow(h2 * h2 + dt * dt, 0.25);
}

double euclid_between(std::span<const double> c, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
  return std::sqrt(s);
}

}  // namespace

std::size_t greedy_ball_cover(const PointCloud& cloud, double delta, GaugeKind gauge) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("greedy_ball_cover: delta must be positive");
  if (gauge == GaugeKind::CarnotCaratheodory) throw InvalidArgument("greedy_ball_cover: use koranyi or euclidean");
  const int n = cloud.dim().n();
  const int d = cloud.dim().ambient();
  if (cloud.size() == 0) return 0;

  const std::vector<double> side = box_sides({delta, gauge}, d);
  // Window in the t direction: the group twist between a centre and a point
  // within distance δ is bounded by Σ_j (max|x_j|·min(δ, range y_j) + max|y_j|·min(δ, range x_j)).
  std::int64_t t_reach = 1;
  if (gauge == GaugeKind::Koranyi) {
    std::vector<double> lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity()),
        amax(d, 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.at(i);
      for (int k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
        amax[k] = std::max(amax[k], std::abs(p[k]));
      }
    }
    double twist = 0.0;
    for (int j = 0; j < n; ++j) {
      twist += amax[j] * std::min(delta, hi[j + n] - lo[j + n]) + amax[j + n] * std::min(delta, hi[j] - lo[j]);
    }
    t_reach = 1 + static_cast<std::int64_t>(std::ceil(twist / side[d - 1]));
  }

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  std::vector<std::size_t> centres;
  std::vector<std::int64_t> base(d), off(d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.at(i);
    for (int k = 0; k < d; ++k) base[k] = box_index(p[k], 0.0, side[k]);
    bool covered = false;
    for (int k = 0; k < d; ++k) off[k] = (k == d - 1) ? -t_reach : -1;
    while (!covered) {
      std::uint64_t h = 0;
      for (int k = 0; k < d; ++k) h = mix(h, base[k] + off[k]);
      if (auto it = cells.find(h); it != cells.end()) {
        for (std::size_t c : it->second) {
          const auto q = cloud.at(c);
          const double dist = gauge == GaugeKind::Koranyi ? koranyi_between(q, p, n) : euclid_between(q, p);
          if (dist <= delta) {
            covered = true;
            break;
          }
        }
      }
      int k = 0;
      for (; k < d; ++k) {
        const std::int64_t reach = (k == d - 1) ? t_reach : 1;
        if (++off[k] <= reach) break;
        off[k] = -reach;
      }
      if (k == d) break;
    }
    if (!covered) {
      std::uint64_t h = 0;
      for (int k = 0; k < d; ++k) h = mix(h, base[k]);
      cells[h].push_back(i);
      centres.push_back(i);
    }
  }
  return centres.size();
}

}  // namespace heislab
