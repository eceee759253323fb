#include <doctest.h>

#include <cmath>
#include <random>

#include "heislab/measure.hpp"
#include "oracles/brute_cover.hpp"

using namespace heislab;

namespace {

std::vector<double> dyadic(int from, int to) {
  std::vector<double> s;
  for (int k = from; k <= to; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

MapImageCloud segment_cloud(const char* id, std::size_t points) {
  return MapImageCloud(gallery_map(id), GridDomain({0.0}, {1.0 / static_cast<double>(points - 1)}, {points}));
}

MapImageCloud plane_cloud(std::size_t nx, std::size_t nt) {
  return MapImageCloud(gallery_map("vertical-plane"),
                       GridDomain({0.0, 0.0}, {1.0 / static_cast<double>(nx - 1), 1.0 / static_cast<double>(nt - 1)},
                                  {nx, nt}));
}

PointCloud materialize(const MapImageCloud& m) {
  std::vector<double> coords(m.size() * 3);
  for (std::size_t i = 0; i < m.size(); ++i) m.fill(i, std::span<double>(coords.data() + 3 * i, 3));
  return PointCloud(m.dim(), std::move(coords));
}

}  // namespace

TEST_CASE("point clouds") {
  const PointCloud c = PointCloud::from_points({HPoint({1}, {2}, 3), HPoint({4}, {5}, 6)});
  CHECK(c.size() == 2);
  CHECK(c.point(1) == HPoint({4}, {5}, 6));
  CHECK_THROWS_AS(PointCloud(HeisDim(1), {}), InvalidArgument);
  CHECK_THROWS_AS(PointCloud(HeisDim(1), {1, 2}), InvalidArgument);
  CHECK_THROWS_AS(PointCloud(HeisDim(1), {1, 2, std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(PointCloud(HeisDim(1), {1, 2, 3}, {1, 2}), InvalidArgument);

  const SampledMap f = sample_analytic("vertical-plane", GridDomain::cube(2, 0, 1, 5));
  const PointCloud fc = cloud_from_map(f);
  CHECK(fc.size() == 25);
  CHECK(fc.weights().size() == 25);
  CHECK(fc.weights()[12] == doctest::Approx(1.0 / 16));
  const MapImageCloud lazy(gallery_map("vertical-plane"), GridDomain::cube(2, 0, 1, 5));
  CHECK(materialize(lazy).coords() == fc.coords());
}

TEST_CASE("single point") {
  const PointCloud p = PointCloud::from_points({HPoint({0.3}, {0.2}, 0.1)});
  for (double d : dyadic(0, 10)) {
    const CoverReport r = heis_box_count(p, d, GaugeKind::Koranyi, 3.0);
    CHECK(r.count == 1);
    CHECK(r.content == d * d * d);
  }
  const auto s = dyadic(2, 8);
  const ContentSeries cs = content_at_exponent(p, s, 3.0, GaugeKind::Koranyi);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(cs.reports[i].content == s[i] * s[i] * s[i]);
  CHECK(dimension_estimate(p, s, GaugeKind::Koranyi).slope == 0.0);
}

TEST_CASE("segment counts") {
  const MapImageCloud h = segment_cloud("horizontal-segment", 4097);
  for (double d : dyadic(1, 8)) {
    const std::size_t n = heis_box_count(h, d, GaugeKind::Koranyi).count;
    CHECK(n >= static_cast<std::size_t>(std::floor(1 / d)));
    CHECK(n <= static_cast<std::size_t>(std::ceil(1 / d)) + 1);
  }
  const MapImageCloud v = segment_cloud("vertical-segment", 1 << 16);
  for (double d : dyadic(1, 6)) {
    const double n = static_cast<double>(heis_box_count(v, d, GaugeKind::Koranyi).count);
    CHECK(n >= 0.5 / (d * d));
    CHECK(n <= 2.0 / (d * d));
  }
}

TEST_CASE("dimension estimates") {
  const auto s = dyadic(3, 8);
  const GaugePair h = euclid_vs_heis_compare(segment_cloud("horizontal-segment", 4097), s);
  CHECK(h.heisenberg.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(h.euclidean.slope == doctest::Approx(1.0).epsilon(0.1));

  const GaugePair v = euclid_vs_heis_compare(segment_cloud("vertical-segment", (1 << 20) + 1), s);
  CHECK(std::abs(v.heisenberg.slope - 2.0) <= 0.15);
  CHECK(std::abs(v.euclidean.slope - 1.0) <= 0.1);

  const GaugePair p = euclid_vs_heis_compare(plane_cloud(129, 16385), dyadic(1, 6));
  MESSAGE("small vertical plane: koranyi " << p.heisenberg.slope << " euclidean " << p.euclidean.slope);
  // Coarse schedule: boundary boxes pull both slopes down; the full-size run is in the acceptance suite.
  CHECK(std::abs(p.heisenberg.slope - 3.0) <= 0.3);
  CHECK(std::abs(p.euclidean.slope - 2.0) <= 0.3);
  CHECK(p.heisenberg.slope - p.euclidean.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(p.heisenberg.half_width > 0.0);
}

TEST_CASE("resolution and schedule checks") {
  CHECK_THROWS_AS(dimension_estimate(segment_cloud("horizontal-segment", 65), dyadic(3, 8), GaugeKind::Koranyi),
                  UnderResolved);
  CHECK_THROWS_AS(dimension_estimate(segment_cloud("horizontal-segment", 65), dyadic(3, 5), GaugeKind::Koranyi),
                  InvalidArgument);
  const std::vector<double> s{0.5, 0.25, 0.125, -0.01};
  CHECK_THROWS_AS(require_dimension_schedule(s), InvalidArgument);
  CHECK_NOTHROW(require_dimension_schedule(dyadic(0, 5)));
  const std::vector<std::size_t> counts{1, 2, 4, 8};
  CHECK_THROWS_AS(fit_dimension(GaugeKind::Koranyi, dyadic(0, 2), counts), InvalidArgument);
}

TEST_CASE("contents at exponent three") {
  const ContentSeries h = content_at_exponent(segment_cloud("horizontal-segment", 4097), dyadic(4, 8), 3.0,
                                              GaugeKind::Koranyi);
  for (std::size_t i = 1; i < h.reports.size(); ++i) CHECK(h.reports[i - 1].content / h.reports[i].content >= 3.5);

  const ContentSeries p = content_at_exponent(plane_cloud(129, 8193), dyadic(1, 5), 3.0, GaugeKind::Koranyi);
  CHECK(p.max_content / p.min_content <= 4.0);
}

TEST_CASE("covering invariants") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> pts;
  for (int i = 0; i < 3000; ++i) {
    const double s = u(rng), v = u(rng);
    pts.insert(pts.end(), {s, 0.5 * s * s, v});
  }
  const PointCloud c(HeisDim(1), pts);
  const auto s = dyadic(0, 7);
  std::vector<BoxScale> boxes;
  for (double d : s) boxes.push_back({d, GaugeKind::Koranyi});
  for (double d : s) boxes.push_back({d, GaugeKind::Euclidean});
  const auto counts = count_boxes(c, std::span<const BoxScale>(boxes));
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(counts[i] >= counts[i - 1]);
    CHECK(counts[s.size() + i] >= counts[s.size() + i - 1]);
  }

  // Dyadic dilation with a dilated origin: exact.
  const std::vector<double> origin{0.125, -0.25, 0.0625};
  for (double lambda : {2.0, 0.5, 8.0}) {
    std::vector<HPoint> moved;
    for (std::size_t i = 0; i < c.size(); ++i) moved.push_back(dilate(lambda, c.point(i)));
    const PointCloud dc = PointCloud::from_points(moved);
    const std::vector<double> dorigin{lambda * origin[0], lambda * origin[1], lambda * lambda * origin[2]};
    for (double d : s) {
      const BoxScale a{d, GaugeKind::Koranyi}, b{lambda * d, GaugeKind::Koranyi};
      CHECK(count_boxes(c, std::span<const BoxScale>(&a, 1), origin)[0] ==
            count_boxes(dc, std::span<const BoxScale>(&b, 1), dorigin)[0]);
    }
  }

  // Left translation: a bounded factor.
  const HPoint g({0.37}, {-0.61}, 0.2);
  std::vector<HPoint> shifted_pts;
  for (std::size_t i = 0; i < c.size(); ++i) shifted_pts.push_back(group_mul(g, c.point(i)));
  const PointCloud tc = PointCloud::from_points(shifted_pts);
  for (double d : dyadic(1, 5)) {
    const double a = static_cast<double>(heis_box_count(c, d, GaugeKind::Koranyi).count);
    const double b = static_cast<double>(heis_box_count(tc, d, GaugeKind::Koranyi).count);
    CHECK(std::max(a / b, b / a) <= 16.0);
  }
  CHECK_THROWS_AS(heis_box_count(c, 0.0, GaugeKind::Koranyi), InvalidArgument);
}

TEST_CASE("greedy cover matches the brute-force net") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> pts;
  for (int i = 0; i < 1500; ++i) pts.insert(pts.end(), {u(rng), u(rng), 2 * u(rng)});
  const PointCloud c(HeisDim(1), pts);
  for (double d : {0.6, 0.3, 0.15, 0.08}) CHECK(greedy_ball_cover(c, d, GaugeKind::Koranyi) == oracle::greedy_net(pts, d));
  CHECK_THROWS_AS(greedy_ball_cover(c, 0.1, GaugeKind::CarnotCaratheodory), InvalidArgument);
  CHECK(greedy_ball_cover(c, 100.0, GaugeKind::Euclidean) == 1);
}

TEST_CASE("box and ball slopes agree") {
  const PointCloud plane = materialize(plane_cloud(129, 8193));
  const auto s = dyadic(0, 5);
  const DimensionFit boxes = dimension_estimate(plane, s, GaugeKind::Koranyi);
  std::vector<std::size_t> nets;
  for (double d : s) nets.push_back(greedy_ball_cover(plane, d, GaugeKind::Koranyi));
  const DimensionFit balls = fit_dimension(GaugeKind::Koranyi, s, nets);
  MESSAGE("vertical plane: box slope " << boxes.slope << " +- " << boxes.half_width << ", ball slope "
                                       << balls.slope << " +- " << balls.half_width);
  CHECK(std::abs(boxes.slope - balls.slope) <= std::max(0.2, boxes.half_width + balls.half_width));
}
