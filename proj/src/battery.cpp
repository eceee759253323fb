#include "heislab/battery.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "heislab/blowup.hpp"
#include "heislab/contact.hpp"
#include "heislab/errors.hpp"

namespace heislab {

namespace {

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void require_dims(const BatteryConfig& cfg) {
  if (cfg.dims.empty()) throw InvalidArgument("battery: no Heisenberg dimensions given");
  for (int n : cfg.dims) {
    if (n < 1) throw InvalidArgument("battery: n must be >= 1, got " + std::to_string(n));
  }
  if (cfg.trials < 1 || cfg.green_trials < 1) throw InvalidArgument("battery: trial counts must be positive");
}

// Cycles through n ∈ dims and m ∈ {n+1, …, 2n} (m = 2 when n = 1).
std::array<int, 2> shape_for(const BatteryConfig& cfg, int trial) {
  const int n = cfg.dims[static_cast<std::size_t>(trial) % cfg.dims.size()];
  const int span = std::max(1, n);
  const int m = n + 1 + (trial / static_cast<int>(cfg.dims.size())) % span;
  return {n, m};
}

void tally(BatteryResult& r, double metric, bool pass) {
  ++r.trials;
  if (pass) ++r.passed;
  if (std::isfinite(metric)) r.worst = std::max(r.worst, metric);
}

}  // namespace

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = uniform(rng);
  return M;
}

Eigen::VectorXd random_vector(Rng& rng, int size) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = uniform(rng);
  return v;
}

Eigen::MatrixXd paired_parallel_matrix(Rng& rng, int n, int m) {
  Eigen::MatrixXd B(2 * n, m);
  for (int j = 0; j < n; ++j) {
    const Eigen::RowVectorXd u = random_matrix(rng, 1, m);
    const double lambda = uniform(rng, -2.0, 2.0);
    B.row(j) = u;
    B.row(j + n) = lambda * u;
  }
  return B;
}

Eigen::MatrixXd shared_row_space_matrix(Rng& rng, int n, int m) {
  const Eigen::MatrixXd basis = random_matrix(rng, n, m);
  const Eigen::MatrixXd a = random_matrix(rng, n, n);
  Eigen::MatrixXd c = random_matrix(rng, n, n);
  c = 0.5 * (c + c.transpose()).eval();
  const Eigen::MatrixXd top = a * basis;
  Eigen::MatrixXd B(2 * n, m);
  B.topRows(n) = top;
  B.bottomRows(n) = c * top;
  return B;
}

BatteryResult j_pairing_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed);
  BatteryResult r{"j_pairing", 0, 0, 0.0, cfg.pairing_tol};
  for (int t = 0; t < cfg.trials; ++t) {
    const auto [n, m] = shape_for(cfg, t);
    const Eigen::MatrixXd B = random_matrix(rng, 2 * n, m);
    const Eigen::VectorXd v = random_vector(rng, m);
    const Eigen::VectorXd w = random_vector(rng, m);
    Eigen::MatrixXd J = symplectic_j(n);
    if (cfg.corrupt_j) J(0, n) = -J(0, n);
    const double scale = 1.0 + B.squaredNorm() * v.norm() * w.norm();
    const double metric = j_pairing_residual(B, v, w, J) / scale;
    tally(r, metric, metric <= cfg.pairing_tol);
  }
  return r;
}

BatteryResult wedge_null_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed + 1);
  BatteryResult r{"wedge_null_rank", 0, 0, 0.0, cfg.rank_bound};
  for (int t = 0; t < cfg.trials; ++t) {
    const auto [n, m] = shape_for(cfg, t);
    const Eigen::MatrixXd B = (t % 2 == 0) ? paired_parallel_matrix(rng, n, m) : shared_row_space_matrix(rng, n, m);
    const RankCertificate cert = rank_certificate(B);
    const auto& s = cert.singular_values;
    const double ratio = static_cast<int>(s.size()) > n && s.front() > 0.0 ? s[n] / s.front() : 0.0;
    tally(r, ratio, cert.verdict == Verdict::WedgeNullRankLeqN && ratio <= cfg.rank_bound);
  }
  return r;
}

BatteryResult full_rank_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed + 2);
  BatteryResult r{"full_rank_wedge_nonzero", 0, 0, 0.0, 0.0};
  for (int t = 0; t < cfg.trials; ++t) {
    const auto [n, m] = shape_for(cfg, t);
    const Eigen::MatrixXd B = random_matrix(rng, 2 * n, m);
    const RankCertificate cert = rank_certificate(B);
    tally(r, 0.0, cert.verdict == Verdict::WedgeNonzero && cert.numerical_rank == std::min(2 * n, m));
  }
  return r;
}

BatteryResult antisymmetry_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed + 3);
  BatteryResult r{"wedge_antisymmetry", 0, 0, 0.0, 0.0};
  for (int t = 0; t < cfg.trials; ++t) {
    const auto [n, m] = shape_for(cfg, t);
    const Eigen::MatrixXd W = wedge_sum(random_matrix(rng, 2 * n, m));
    const double asym = (W + W.transpose()).cwiseAbs().maxCoeff();
    tally(r, asym, asym == 0.0);
  }
  return r;
}

BatteryResult green_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed + 4);
  BatteryResult r{"green_identity", 0, 0, 0.0, cfg.green_tol};
  const double radius = 0.5;
  const CirclePath path({0.0, 0.0}, radius, cfg.circle_nodes);
  for (int t = 0; t < cfg.green_trials; ++t) {
    const int n = cfg.dims[static_cast<std::size_t>(t) % cfg.dims.size()];
    const Eigen::MatrixXd A = random_matrix(rng, 2 * n + 1, 2);
    auto u = [&](std::span<const double> y, std::span<double> out) {
      for (int c = 0; c < 2 * n + 1; ++c) out[c] = A(c, 0) * y[0] + A(c, 1) * y[1];
    };
    const double sdet = jacobian_wedge(A);
    const double defect = circle_contact_form(u, n, path);
    const double metric = std::abs(defect - 2.0 * std::numbers::pi * radius * radius * sdet) / (1.0 + std::abs(sdet));
    tally(r, metric, metric <= cfg.green_tol);
  }
  return r;
}

BatteryResult stokes_battery(const BatteryConfig& cfg) {
  require_dims(cfg);
  Rng rng(cfg.seed + 5);
  BatteryResult r{"stokes_zero", 0, 0, 0.0, cfg.stokes_tol};
  for (int t = 0; t < cfg.green_trials; ++t) {
    // v = Σ_{i+j ≤ 5} a_ij y1^i y2^j on a random circle inside [−1, 1]².
    std::array<double, 36> a{};
    for (double& c : a) c = uniform(rng);
    const std::array<double, 2> centre{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
    const double radius = uniform(rng, 0.1, 0.5);
    auto v = [&](double y1, double y2) {
      double s = 0.0, pi = 1.0;
      for (int i = 0; i <= 5; ++i, pi *= y1) {
        double pj = pi;
        for (int j = 0; i + j <= 5; ++j, pj *= y2) s += a[i * 6 + j] * pj;
      }
      return s;
    };
    const double metric =
        std::abs(oriented_circle_integral([](double, double) { return 1.0; }, v, CirclePath(centre, radius, cfg.circle_nodes)));
    tally(r, metric, metric <= cfg.stokes_tol);
  }
  return r;
}

std::vector<BatteryResult> run_batteries(const BatteryConfig& cfg) {
  require_dims(cfg);
  return {j_pairing_battery(cfg), wedge_null_battery(cfg), full_rank_battery(cfg),
          antisymmetry_battery(cfg), green_battery(cfg), stokes_battery(cfg)};
}

}  // namespace heislab
