#include <doctest.h>

#include <cmath>
#include <random>

#include "heislab/battery.hpp"
#include "heislab/contact.hpp"
#include "heislab/jets.hpp"
#include "oracles/direct_expansion.hpp"

using namespace heislab;

namespace {

Eigen::MatrixXd rows2(double a, double b, double c, double d) {
  Eigen::MatrixXd B(2, 2);
  B << a, b, c, d;
  return B;
}

JetField jets_of(const char* id, const GridDomain& g) { return jacobian_fd(sample_analytic(id, g)); }

std::size_t node_near(const GridDomain& g, std::initializer_list<double> p) {
  const std::vector<double> q(p);
  std::vector<std::size_t> multi(q.size());
  for (std::size_t k = 0; k < q.size(); ++k)
    multi[k] = static_cast<std::size_t>(std::lround((q[k] - g.lower(k)) / g.spacing()[k]));
  return g.node_at(multi);
}

}  // namespace

TEST_CASE("symplectic J") {
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd J = symplectic_j(n);
    CHECK((J * J + Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((J.transpose() + J).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(symplectic_j(0), InvalidArgument);
}

TEST_CASE("contact residual examples") {
  const GridDomain g = GridDomain::cube(2, 0.0, 3.0, 31);
  const auto r0 = contact_residual(jets_of("horizontal-line", g));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(r0.norm(i) == 0.0);

  const auto r1 = contact_residual(jets_of("vertical-graph", g));
  const std::size_t node = node_near(g, {1.0, 2.0});
  CHECK(std::abs(r1.at(node)[0] - 2.0) <= 1e-10);
  CHECK(std::abs(r1.at(node)[1] + 1.0) <= 1e-10);
}

TEST_CASE("wedge examples") {
  const Eigen::MatrixXd W = wedge_sum(rows2(1, 0, 0, 1));
  CHECK(W(0, 1) == 1.0);
  CHECK(W(1, 0) == -1.0);
  CHECK(W(0, 0) == 0.0);

  Rng rng(4);
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd B = paired_parallel_matrix(rng, n, n + 1);
    CHECK(wedge_sum(B).cwiseAbs().maxCoeff() <= 1e-15);
  }

  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd B = random_matrix(rng, 4, 3);
    worst = std::max(worst, (wedge_sum(B) - oracle::wedge_by_minors(B)).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd W2 = wedge_sum(random_matrix(rng, 6, 5));
    CHECK((W2 + W2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(worst <= 1e-13);
  CHECK_THROWS_AS(wedge_sum(Eigen::MatrixXd::Zero(3, 2)), InvalidArgument);
}

TEST_CASE("wedge field is antisymmetric bitwise") {
  const GridDomain g = GridDomain::cube(3, -1.0, 1.0, 7);
  const WedgeField w = wedge_field(jets_of("lagrangian-h2-m3", g));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) CHECK(w.at(i, k, l) == -w.at(i, l, k));
}

TEST_CASE("J-pairing identity") {
  CHECK(j_pairing_check(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)) == 0.0);
  Rng rng(12);
  double worst = 0.0, oracle_gap = 0.0, orth = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + t % 3;
    const int m = n + 1 + (t / 3) % n;
    const Eigen::MatrixXd B = random_matrix(rng, 2 * n, m);
    const Eigen::VectorXd v = random_vector(rng, m), w = random_vector(rng, m);
    worst = std::max(worst, j_pairing_check(B, v, w) / (1 + B.squaredNorm() * v.norm() * w.norm()));
    // The library pairing against the hand expansion.
    const Eigen::MatrixXd W = oracle::wedge_by_minors(B);
    double bilinear = 0.0;
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) bilinear += w(k) * v(l) * W(l, k);
    oracle_gap = std::max(oracle_gap, std::abs(oracle::symplectic_pairing(B, v, w) - bilinear));
    // Wedge-null B: the ranges of B are J-orthogonal.
    const Eigen::MatrixXd N = shared_row_space_matrix(rng, n, m);
    orth = std::max(orth, std::abs(oracle::symplectic_pairing(N, v, w)));
  }
  CHECK(worst <= 1e-12);
  CHECK(oracle_gap <= 1e-12);
  CHECK(orth <= 1e-12);
  CHECK_THROWS_AS(j_pairing_check(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(2)),
                  InvalidArgument);
}

TEST_CASE("rank certificate examples") {
  const RankCertificate a = rank_certificate(rows2(1, 0, 2, 0));
  CHECK(a.wedge_norm == 0.0);
  CHECK(a.numerical_rank == 1);
  CHECK(a.verdict == Verdict::WedgeNullRankLeqN);

  const RankCertificate b = rank_certificate(rows2(1, 0, 0, 1));
  CHECK(b.verdict == Verdict::WedgeNonzero);
  CHECK(to_string(b.verdict) == "WedgeNonzero");

  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  CHECK(rank_certificate(Eigen::MatrixXd::Zero(2, 2)).verdict == Verdict::WedgeNullRankLeqN);
  CHECK_THROWS_AS(rank_certificate(rows2(1, 0, 0, 1), 0.0, 1e-8), InvalidArgument);
  Eigen::MatrixXd bad = rows2(1, 0, 0, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(singular_values(bad), NumericalFailure);

  // Shared-row-space family against an independent SVD of the full block.
  Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + t % 3;
    const int m = n + 1 + (t / 3) % n;
    const Eigen::MatrixXd B = shared_row_space_matrix(rng, n, m);
    const RankCertificate c = rank_certificate(B);
    CHECK(c.verdict == Verdict::WedgeNullRankLeqN);
    const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(B).singularValues();
    CHECK(s(n) <= 1e-10 * s(0));
  }
}

TEST_CASE("low-rank and max-rank scans") {
  const GridDomain g = GridDomain::cube(2, -1.0, 1.0, 257);
  const JetField cyl = jets_of("horizontal-cylinder", g);
  CHECK(lowrank_scan(cyl).lowrank_fraction == 1.0);
  CHECK(maxrank_scan(cyl) == 0.0);

  const JetField vg = jets_of("vertical-graph", g);
  CHECK(lowrank_scan(vg).lowrank_fraction == 0.0);
  CHECK(maxrank_scan(vg) == 1.0);
  CHECK(lowrank_scan(vg).max_wedge == doctest::Approx(1.0).epsilon(1e-14));

  const JetField r1 = jets_of("rank1-linear", g);
  CHECK(lowrank_scan(r1).lowrank_fraction == 1.0);
  CHECK(maxrank_scan(jets_of("constant", g)) == 0.0);

  const LowRankSummary s = lowrank_scan(cyl);
  CHECK(s.interior_nodes == 255 * 255);
  const NodeScan scan = scan_nodes(cyl);
  CHECK(summarize_lowrank(scan, 1).lowrank_fraction == s.lowrank_fraction);
}

TEST_CASE("horizontal cylinder residual is second order in h") {
  double previous = 0.0;
  for (std::size_t count : {65, 129, 257, 513}) {
    const GridDomain g = GridDomain::cube(2, -1.0, 1.0, count);
    const LowRankSummary s = lowrank_scan(jets_of("horizontal-cylinder", g));
    const double h = g.spacing()[0];
    MESSAGE("h = " << h << ": residual sup " << s.max_residual << ", C = " << s.max_residual / (h * h));
    CHECK(s.max_residual <= 0.2 * h * h);
    if (previous > 0.0) CHECK(previous / s.max_residual == doctest::Approx(4.0).epsilon(0.05));
    previous = s.max_residual;
  }
}

TEST_CASE("BV graph tangency") {
  const GridDomain g = GridDomain::cube(2, 0.0, 2.0, 21);
  std::vector<double> xy(g.size()), zero(g.size(), 0.0), mxy(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coords(i);
    xy[i] = x[0] * x[1];
    mxy[i] = -x[0] * x[1];
  }
  const std::size_t at12 = node_near(g, {1.0, 2.0});
  const std::size_t at37 = node_near(g, {0.3, 0.7});
  // (1, 2) is on the upper boundary in x₂; the one-sided stencil is exact for bilinear g.
  const auto d1 = bv_graph_tangency(ScalarGrid(g, xy));
  CHECK(d1[2 * at12] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(d1[2 * at12 + 1]) <= 1e-12);
  const auto d0 = bv_graph_tangency(ScalarGrid(g, zero));
  CHECK(d0[2 * at37] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(d0[2 * at37 + 1] == doctest::Approx(-0.3).epsilon(1e-12));
  const auto d2 = bv_graph_tangency(ScalarGrid(g, mxy));
  CHECK(std::abs(d2[2 * at12]) <= 1e-12);
  CHECK(d2[2 * at12 + 1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK_THROWS_AS(bv_graph_tangency(ScalarGrid(GridDomain::cube(3, 0, 1, 3), std::vector<double>(27))),
                  InvalidArgument);
}
