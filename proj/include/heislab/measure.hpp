#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/heis.hpp"
#include "heislab/jets.hpp"

namespace heislab {

/// Anything that can stream points of H^n by index.
template <class S>
concept PointSource = requires(const S& s, std::size_t i, std::span<double> out) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.dim() } -> std::convertible_to<HeisDim>;
  s.fill(i, out);
};

/// A finite sample of Σ ⊂ H^n; coordinates row-major (point, 2n+1).
class PointCloud {
 public:
  PointCloud(HeisDim dim, std::vector<double> coords, std::vector<double> weights = {});
  static PointCloud from_points(const std::vector<HPoint>& pts);

  HeisDim dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_.ambient(); }
  void fill(std::size_t i, std::span<double> out) const;
  std::span<const double> at(std::size_t i) const {
    const auto d = static_cast<std::size_t>(dim_.ambient());
    return {coords_.data() + i * d, d};
  }
  HPoint point(std::size_t i) const { return HPoint::from_coords(at(i)); }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  HeisDim dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// Image of a grid-sampled map, with per-node source cell volumes as weights.
PointCloud cloud_from_map(const SampledMap& f);

/// Lazily evaluated image f(grid) of an analytic map; never materialized.
class MapImageCloud {
 public:
  MapImageCloud(AnalyticMap f, GridDomain grid);

  HeisDim dim() const { return f_.dim; }
  std::size_t size() const { return grid_.size(); }
  void fill(std::size_t i, std::span<double> out) const;
  const GridDomain& grid() const { return grid_; }
  const AnalyticMap& map() const { return f_; }

 private:
  AnalyticMap f_;
  GridDomain grid_;
};

/// Box family at one scale: for Korányi (and CC) the boxes are dyadic-style
/// anisotropic cells of side δ in x, y and δ² in t; for Euclidean they are
/// cubes of side δ. The grid is anchored at `origin` (default: 0).
struct BoxScale {
  double delta = 1.0;
  GaugeKind gauge = GaugeKind::Koranyi;
};

struct CoverReport {
  double delta = 0.0;
  std::size_t count = 0;
  double exponent = 0.0;
  double content = 0.0;  // count · δ^exponent
  GaugeKind gauge = GaugeKind::Koranyi;
};

struct DimensionFit {
  GaugeKind gauge = GaugeKind::Koranyi;
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  double slope = 0.0;  // of log N against log(1/δ)
  double intercept = 0.0;
  double residual = 0.0;
  double half_width = 0.0;
};

struct ContentSeries {
  double exponent = 0.0;
  std::vector<CoverReport> reports;
  double min_content = 0.0;
  double max_content = 0.0;
};

struct GaugePair {
  DimensionFit euclidean;
  DimensionFit heisenberg;
};

/// Occupied-box counts for several scales in one streaming pass.
template <PointSource S>
std::vector<std::size_t> count_boxes(const S& src, std::span<const BoxScale> scales,
                                     std::span<const double> origin = {});

template <PointSource S>
CoverReport heis_box_count(const S& src, double delta, GaugeKind gauge, double exponent = 0.0);

/// Throws UnderResolved when the cloud cannot support the finest scale.
template <PointSource S>
DimensionFit dimension_estimate(const S& src, std::span<const double> scales, GaugeKind gauge);

template <PointSource S>
ContentSeries content_at_exponent(const S& src, std::span<const double> scales, double exponent, GaugeKind gauge);

template <PointSource S>
GaugePair euclid_vs_heis_compare(const S& src, std::span<const double> scales);

/// Size of a greedy δ-net in the chosen gauge distance (Korányi or
/// Euclidean); comparable to the covering number at δ within factor-2 scale.
std::size_t greedy_ball_cover(const PointCloud& cloud, double delta, GaugeKind gauge);

/// Fits log N vs log(1/δ); enforces ≥ 4 scales spanning ≥ 1.5 decades.
DimensionFit fit_dimension(GaugeKind gauge, std::span<const double> scales, std::span<const std::size_t> counts);

/// Refuses clouds whose finest-scale mean box occupancy is below 4 points
/// unless the counts are scale-independent (isolated points).
void require_resolved(std::size_t points, std::span<const double> scales, std::span<const std::size_t> counts);

/// ≥ 4 scales, span ≥ 1.5 decades.
void require_dimension_schedule(std::span<const double> scales);

namespace detail {

std::vector<std::size_t> count_boxes_impl(std::size_t points, int d,
                                          const std::function<void(std::size_t, std::span<double>)>& fill,
                                          std::span<const BoxScale> scales, std::span<const double> origin);

}  // namespace detail

// ---------------------------------------------------------------------------

template <PointSource S>
std::vector<std::size_t> count_boxes(const S& src, std::span<const BoxScale> scales, std::span<const double> origin) {
  return detail::count_boxes_impl(
      src.size(), src.dim().ambient(), [&src](std::size_t i, std::span<double> out) { src.fill(i, out); }, scales,
      origin);
}

template <PointSource S>
CoverReport heis_box_count(const S& src, double delta, GaugeKind gauge, double exponent) {
  const BoxScale sc{delta, gauge};
  const auto counts = count_boxes(src, std::span<const BoxScale>(&sc, 1));
  return CoverReport{delta, counts[0], exponent, static_cast<double>(counts[0]) * std::pow(delta, exponent), gauge};
}

template <PointSource S>
DimensionFit dimension_estimate(const S& src, std::span<const double> scales, GaugeKind gauge) {
  require_dimension_schedule(scales);
  std::vector<BoxScale> boxes;
  for (double s : scales) boxes.push_back({s, gauge});
  const auto counts = count_boxes(src, std::span<const BoxScale>(boxes));
  require_resolved(src.size(), scales, counts);
  return fit_dimension(gauge, scales, counts);
}

template <PointSource S>
ContentSeries content_at_exponent(const S& src, std::span<const double> scales, double exponent, GaugeKind gauge) {
  if (scales.empty()) throw InvalidArgument("content_at_exponent: empty scale schedule");
  std::vector<BoxScale> boxes;
  for (double s : scales) boxes.push_back({s, gauge});
  const auto counts = count_boxes(src, std::span<const BoxScale>(boxes));
  require_resolved(src.size(), scales, counts);
  ContentSeries out;
  out.exponent = exponent;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double c = static_cast<double>(counts[i]) * std::pow(scales[i], exponent);
    out.reports.push_back({scales[i], counts[i], exponent, c, gauge});
  }
  out.min_content = out.max_content = out.reports.front().content;
  for (const auto& r : out.reports) {
    out.min_content = std::min(out.min_content, r.content);
    out.max_content = std::max(out.max_content, r.content);
  }
  return out;
}

template <PointSource S>
GaugePair euclid_vs_heis_compare(const S& src, std::span<const double> scales) {
  require_dimension_schedule(scales);
  std::vector<BoxScale> boxes;
  for (double s : scales) boxes.push_back({s, GaugeKind::Euclidean});
  for (double s : scales) boxes.push_back({s, GaugeKind::Koranyi});
  const auto counts = count_boxes(src, std::span<const BoxScale>(boxes));
  const std::span<const std::size_t> all(counts);
  const auto eu = all.subspan(0, scales.size());
  const auto he = all.subspan(scales.size());
  require_resolved(src.size(), scales, eu);
  require_resolved(src.size(), scales, he);
  return {fit_dimension(GaugeKind::Euclidean, scales, eu), fit_dimension(GaugeKind::Koranyi, scales, he)};
}

}  // namespace heislab
