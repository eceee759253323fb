#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heislab {

using Rng = std::mt19937_64;

/// Entries uniform in [−1, 1].
Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols);
Eigen::VectorXd random_vector(Rng& rng, int size);

/// 2n×m with u_{j+n} = λ_j u_j.
Eigen::MatrixXd paired_parallel_matrix(Rng& rng, int n, int m);
/// 2n×m with u_1..u_n in a random n-dimensional row space and
/// u_{j+n} = Σ_i c_{ji} u_i for a symmetric c (the symmetry is what makes
/// the wedge vanish).
Eigen::MatrixXd shared_row_space_matrix(Rng& rng, int n, int m);

struct BatteryResult {
  std::string name;
  int trials = 0;
  int passed = 0;
  double worst = 0.0;      // largest normalized metric seen
  double tolerance = 0.0;  // pass threshold on that metric
  bool ok() const { return passed == trials; }
};

struct BatteryConfig {
  std::uint64_t seed = 1;
  std::vector<int> dims{1, 2, 3};
  int trials = 1000;
  int green_trials = 100;
  bool corrupt_j = false;  // negative control: perturbs J in the pairing battery
  double pairing_tol = 1e-12;
  double rank_bound = 1e-10;
  double green_tol = 1e-6;
  double stokes_tol = 1e-8;
  int circle_nodes = 1 << 14;
};

/// |⟨Bw, JBv⟩ − Σ w_k v_l W_lk| / (1 + ‖B‖_F² ‖v‖ ‖w‖) over random triples.
BatteryResult j_pairing_battery(const BatteryConfig& cfg);
/// Constructed wedge-null matrices, alternating both families: verdict
/// WedgeNullRankLeqN and σ_{n+1} ≤ rank_bound·σ₁.
BatteryResult wedge_null_battery(const BatteryConfig& cfg);
/// Random matrices with m ≥ n+1: verdict WedgeNonzero.
BatteryResult full_rank_battery(const BatteryConfig& cfg);
/// W_kl == −W_lk bitwise for random B.
BatteryResult antisymmetry_battery(const BatteryConfig& cfg);
/// |defect − 2πr² Σdet| / (1 + |Σdet|) for random linear maps at r = 1/2.
BatteryResult green_battery(const BatteryConfig& cfg);
/// |∮ dv| for random polynomials of degree ≤ 5 on random circles.
BatteryResult stokes_battery(const BatteryConfig& cfg);

std::vector<BatteryResult> run_batteries(const BatteryConfig& cfg);

}  // namespace heislab
