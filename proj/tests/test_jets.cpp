#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heislab/jets.hpp"
#include "oracles/quadrature.hpp"

using namespace heislab;

namespace {

std::vector<double> at(const AnalyticMap& f, std::initializer_list<double> y) {
  const std::vector<double> v(y);
  return f(v);
}

double max_jac_error(const AnalyticMap& f, const GridDomain& g) {
  const JetField j = jacobian_fd(sample_analytic(f, g));
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!j.interior[i]) continue;
    const Eigen::MatrixXd exact = f.jacobian_at(g.coords(i));
    err = std::max(err, (j.jacobian_matrix(i) - exact).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

TEST_CASE("grid domain") {
  const GridDomain g = GridDomain::cube(2, -1.0, 1.0, 5);
  CHECK(g.size() == 25);
  CHECK(g.spacing()[0] == 0.5);
  CHECK(g.coords(6) == std::vector<double>{-0.5, -0.5});
  CHECK(g.is_interior(6));
  CHECK_FALSE(g.is_interior(0));
  CHECK_FALSE(g.is_interior(4));
  const std::size_t multi[2] = {3, 2};
  CHECK(g.node_at(multi) == 13);
  CHECK(g.index_along(13, 0) == 3);
  CHECK(g.index_along(13, 1) == 2);
  CHECK_THROWS_AS(GridDomain({0.0}, {0.0}, {4}), InvalidArgument);
  CHECK_THROWS_AS(GridDomain({0.0}, {-1.0}, {4}), InvalidArgument);
  CHECK_THROWS_AS(GridDomain({0.0}, {1.0}, {1}), InvalidArgument);
  CHECK_THROWS_AS(GridDomain({0.0, 0.0}, {1.0}, {4, 4}), InvalidArgument);
  CHECK_THROWS_AS(GridDomain::cube(3, 0, 1, 100000), InvalidArgument);
}

TEST_CASE("gallery evaluations") {
  CHECK(at(gallery_map("horizontal-cylinder"), {0, 0.7}) == std::vector<double>{1, 0, 0});
  CHECK(at(gallery_map("id-embed"), {0.25, 0.5}) == std::vector<double>{0.25, 0.5, 0});
  CHECK(at(gallery_map("graph-xy"), {1, 2}) == std::vector<double>{1, 2, 2});
  CHECK(at(gallery_map("constant"), {0.3, -4}) == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(gallery_map("no-such-map"), InvalidArgument);
  CHECK_THROWS_AS(sample_analytic("no-such-map", GridDomain::cube(2, 0, 1, 3)), InvalidArgument);
  CHECK_THROWS_AS(sample_analytic(gallery_map("graph-xy"), GridDomain::cube(3, 0, 1, 3)), InvalidArgument);

  Eigen::MatrixXd A(3, 2);
  A << 1, 2, 3, 4, 5, 6;
  const AnalyticMap L = linear_map(A);
  CHECK(at(L, {1, -1}) == std::vector<double>{-1, -1, -1});
  const AnalyticMap S = shifted(L, {10, 20, 30});
  CHECK(at(S, {1, -1}) == std::vector<double>{9, 19, 29});
  CHECK_THROWS_AS(shifted(L, {1, 2}), InvalidArgument);
}

TEST_CASE("gallery Jacobians agree with their values") {
  for (const std::string& id : gallery_ids()) {
    const AnalyticMap f = gallery_map(id);
    std::vector<double> y(f.m);
    for (int k = 0; k < f.m; ++k) y[k] = 0.3 + 0.1 * k;
    const Eigen::MatrixXd J = f.jacobian_at(y);
    const double h = 1e-6;
    for (int k = 0; k < f.m; ++k) {
      auto yp = y, ym = y;
      yp[k] += h;
      ym[k] -= h;
      const auto fp = f(yp), fm = f(ym);
      for (int c = 0; c < f.components(); ++c) CHECK(J(c, k) == doctest::Approx((fp[c] - fm[c]) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("finite-difference jets are exact on polynomials of degree two") {
  const GridDomain g2 = GridDomain::cube(2, -1.0, 1.0, 33);
  for (const char* id : {"vertical-graph", "graph-xy", "graph-minus-xy", "quadratic-graph", "radial-quadratic",
                         "quadratic-perturbation", "rank1-linear", "vertical-plane", "constant"}) {
    CAPTURE(id);
    CHECK(max_jac_error(gallery_map(id), g2) <= 1e-10);
  }
  CHECK(max_jac_error(gallery_map("vertical-h2-m3"), GridDomain::cube(3, -1.0, 1.0, 9)) <= 1e-10);

  // ∂₁(y₁²) at y₁ = 1 with h = 0.01.
  const GridDomain g({0.5, 0.0}, {0.01, 0.01}, {101, 3});
  const JetField j = jacobian_fd(sample_analytic("quadratic-graph", g));
  const std::size_t multi[2] = {50, 1};
  const std::size_t node = g.node_at(multi);
  CHECK(g.coords(node)[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(j.jacobian_matrix(node)(2, 0) - 2.0) <= 1e-12);
}

TEST_CASE("central differences are second order") {
  auto err = [](double h) {
    const GridDomain g({1.0 - h, 0.0}, {h, 1.0}, {3, 3});
    AnalyticMap f = gallery_map("horizontal-cylinder");
    const JetField j = jacobian_fd(sample_analytic(f, g));
    // f² = sin y₁, derivative cos 1 at the middle node.
    return std::abs(j.jacobian_matrix(4)(1, 0) - std::cos(1.0));
  };
  const double ratio = oracle::richardson_ratio(err, 0.05);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("slicing") {
  const GridDomain g = GridDomain::cube(3, 0.0, 1.0, 5);
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coords(i);
    u[i] = x[0] + 2 * x[1] + 3 * x[2];
  }
  const ScalarGrid grid(g, u);
  const SliceSpec s{0, 1, {0, 0, 2}};
  const ScalarGrid sl = slice(grid, s);
  CHECK(sl.domain.m() == 2);
  CHECK(sl.domain.size() == 25);
  for (std::size_t i = 0; i < sl.domain.size(); ++i) {
    const auto y = sl.domain.coords(i);
    CHECK(sl.values[i] == doctest::Approx(y[0] + 2 * y[1] + 1.5).epsilon(1e-15));
  }

  const ScalarGrid c(g, std::vector<double>(g.size(), 7.0));
  for (double v : slice(c, SliceSpec{0, 2, {0, 3, 0}}).values) CHECK(v == 7.0);

  CHECK_THROWS_AS(slice(grid, SliceSpec{1, 1, {0, 0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(slice(grid, SliceSpec{0, 1, {0, 0, 5}}), DomainError);
  CHECK_THROWS_AS(slice(grid, SliceSpec{0, 3, {0, 0, 0}}), InvalidArgument);
}

TEST_CASE("slicing commutes with differentiation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  const GridDomain g = GridDomain::cube(3, -1.0, 1.0, 9);
  for (int trial = 0; trial < 20; ++trial) {
    // A random cubic in three variables, written into all three components.
    std::vector<double> c(20);
    for (auto& v : c) v = u(rng);
    std::vector<double> vals(g.size() * 5);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.coords(i);
      int k = 0;
      double p = 0.0;
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b)
          for (int e = 0; a + b + e <= 3; ++e) p += c[k++] * std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], e);
      for (int comp = 0; comp < 5; ++comp) vals[i * 5 + comp] = p * (comp + 1);
    }
    const SampledMap f(g, HeisDim(2), vals);
    const JetField J = jacobian_fd(f);
    for (const SliceSpec& s : {SliceSpec{0, 1, {0, 0, 4}}, SliceSpec{0, 2, {0, 3, 0}}, SliceSpec{1, 2, {6, 0, 0}}}) {
      const JetField a = jacobian_fd(slice(f, s));
      const JetField b = slice(J, s);
      REQUIRE(a.domain == b.domain);
      double worst = 0.0;
      for (std::size_t i = 0; i < a.domain.size(); ++i) {
        if (!a.interior[i]) continue;
        for (std::size_t e = 0; e < a.jacobian(i).size(); ++e)
          worst = std::max(worst, std::abs(a.jacobian(i)[e] - b.jacobian(i)[e]));
      }
      CHECK(worst == 0.0);
    }
  }
}

TEST_CASE("Lebesgue point error") {
  const GridDomain g = GridDomain::cube(2, -1.0, 1.0, 201);
  const std::size_t centre = g.size() / 2;
  CHECK(g.coords(centre) == std::vector<double>{0, 0});

  CHECK(lebesgue_point_error(sample_analytic("constant", g), centre, 0.5) == 0.0);

  Eigen::MatrixXd A(3, 2);
  A << 1, 0.5, -0.3, 2, 0.7, 0.1;
  const SampledMap lin = sample_analytic(linear_map(A), g);
  const double c = oracle::disc_integral([&](double a, double b) { return (A * Eigen::Vector2d(a, b)).norm(); });
  for (double r : {0.2, 0.4, 0.8}) {
    CAPTURE(r);
    CHECK(lebesgue_point_error(lin, centre, r) == doctest::Approx(c * r).epsilon(5e-3));
  }
  const SampledMap id = sample_analytic("id-embed", g);
  CHECK(lebesgue_point_error(id, centre, 0.5) == doctest::Approx(2 * std::numbers::pi / 3 * 0.5).epsilon(5e-3));

  // Unit jump across x₁ = 0 seen from the jump node: the half disc contributes π/2.
  std::vector<double> step(g.size() * 3, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) step[i * 3] = g.coords(i)[0] < 0 ? 1.0 : 0.0;
  const SampledMap jump(g, HeisDim(1), step);
  for (double r : {0.4, 0.2, 0.1, 0.05}) CHECK(lebesgue_point_error(jump, centre, r) > 1.0);

  CHECK_THROWS_AS(lebesgue_point_error(lin, centre, 1.5), DomainError);
  CHECK_THROWS_AS(lebesgue_point_error(lin, centre, 0.0), InvalidArgument);
}
