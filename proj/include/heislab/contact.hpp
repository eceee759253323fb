#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heislab/jets.hpp"

namespace heislab {

/// Per-node ρ = ∇f^{2n+1} − Σ_j (f^j ∇f^{j+n} − f^{j+n} ∇f^j), an m-vector.
/// Zero at a node iff the sampled map is horizontal there (up to FD error).
struct ContactResidualField {
  GridDomain domain;
  std::vector<double> residual;  // row-major (node, axis)
  std::vector<unsigned char> interior;

  std::span<const double> at(std::size_t node) const {
    const auto m = static_cast<std::size_t>(domain.m());
    return {residual.data() + node * m, m};
  }
  double norm(std::size_t node) const;
};

/// Per-node antisymmetric m×m matrix W_kl = Σ_j det[[∂_k f^j, ∂_l f^j], [∂_k f^{j+n}, ∂_l f^{j+n}]].
struct WedgeField {
  GridDomain domain;
  std::vector<double> wedge;  // row-major (node, k, l)
  std::vector<unsigned char> interior;

  double at(std::size_t node, int k, int l) const {
    const auto m = static_cast<std::size_t>(domain.m());
    return wedge[(node * m + k) * m + l];
  }
  double max_abs(std::size_t node) const;
};

/// J = [[0, −I_n], [I_n, 0]].
Eigen::MatrixXd symplectic_j(int n);

ContactResidualField contact_residual(const JetField& j);
WedgeField wedge_field(const JetField& j);

/// Σ_j u_j ∧ u_{j+n} for the rows u_1..u_{2n} of B. The lower triangle is
/// written as the exact negation of the upper one.
Eigen::MatrixXd wedge_sum(const Eigen::MatrixXd& B);

/// |⟨Bw, J Bv⟩ − Σ_{k,l} w_k v_l W_{lk}| with W = wedge_sum(B).
double j_pairing_check(const Eigen::MatrixXd& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w);
/// Same identity against a caller-supplied J (negative controls use a corrupted one).
double j_pairing_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                          const Eigen::MatrixXd& J);

enum class Verdict { WedgeNullRankLeqN, WedgeNonzero, Indeterminate };
std::string to_string(Verdict v);

struct RankCertificate {
  std::vector<double> singular_values;  // descending
  int numerical_rank = 0;
  double wedge_norm = 0.0;  // max |W_kl|
  double tol_wedge = 0.0;
  double tol_rank = 0.0;
  Verdict verdict = Verdict::Indeterminate;
};

inline constexpr double kDefaultRankTolerance = 1e-8;

/// 1e−10 · (1 + max|B|²); wedge entries are quadratic in B.
double default_wedge_tolerance(const Eigen::MatrixXd& B);

/// #{σ_i > τ σ_1}; zero for the zero matrix.
int numerical_rank(const Eigen::MatrixXd& M, double tau = kDefaultRankTolerance);
std::vector<double> singular_values(const Eigen::MatrixXd& M);

/// One-directional check: a wedge-null B (max|W| <= tol_wedge) must satisfy
/// σ_{n+1} <= tol_rank·σ_1, otherwise the verdict is Indeterminate. A nonzero
/// wedge yields WedgeNonzero with no rank claim.
RankCertificate rank_certificate(const Eigen::MatrixXd& B, double tol_wedge, double tol_rank);
RankCertificate rank_certificate(const Eigen::MatrixXd& B);

struct ScanTolerances {
  double rank = kDefaultRankTolerance;
};

/// Per-node diagnostics over the whole grid. Entries of boundary nodes are
/// computed but excluded from every summary.
struct NodeScan {
  std::vector<double> residual_norm;
  std::vector<double> wedge_max;
  std::vector<int> rank_horizontal;  // rank of the 2n×m block B
  std::vector<int> rank_full;        // rank of the full (2n+1)×m Jacobian
  std::vector<unsigned char> interior;
};

NodeScan scan_nodes(const JetField& j, const ScanTolerances& tol = {});

struct LowRankSummary {
  double lowrank_fraction = 0.0;
  double max_residual = 0.0;
  double max_wedge = 0.0;
  std::size_t interior_nodes = 0;
};

LowRankSummary lowrank_scan(const JetField& j, const ScanTolerances& tol = {});
LowRankSummary summarize_lowrank(const NodeScan& scan, int n);

/// Fraction of interior nodes whose full Jacobian has rank m.
double maxrank_scan(const JetField& j, double tol = kDefaultRankTolerance);
double summarize_maxrank(const NodeScan& scan, int m);

/// Per-node ∇g − (−x₂, x₁) for a scalar grid over a planar domain;
/// row-major (node, 2).
std::vector<double> bv_graph_tangency(const ScalarGrid& g);

namespace detail {

// Rows 0..2n−1 of the Jacobian at one node.
Eigen::MatrixXd horizontal_block(const JetField& j, std::size_t node);
void scan_node(const JetField& j, const ScanTolerances& tol, std::size_t node, NodeScan& out);

}  // namespace detail

}  // namespace heislab
