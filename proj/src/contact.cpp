#include "heislab/contact.hpp"

#include <algorithm>
#include <cmath>

namespace heislab {

double ContactResidualField::norm(std::size_t node) const {
  double s = 0.0;
  for (double v : at(node)) s += v * v;
  return std::sqrt(s);
}

double WedgeField::max_abs(std::size_t node) const {
  const auto m = static_cast<std::size_t>(domain.m());
  double best = 0.0;
  for (std::size_t i = 0; i < m * m; ++i) best = std::max(best, std::abs(wedge[node * m * m + i]));
  return best;
}

Eigen::MatrixXd symplectic_j(int n) {
  if (n < 1) throw InvalidArgument("symplectic_j: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return J;
}

namespace {

void residual_node(const JetField& j, std::size_t node, double* out) {
  const int n = j.dim.n();
  const int m = j.domain.m();
  const auto f = j.value(node);
  const auto J = j.jacobian(node);
  for (int k = 0; k < m; ++k) {
    double s = J[(2 * n) * m + k];
    for (int c = 0; c < n; ++c) {
      s -= f[c] * J[(c + n) * m + k] - f[c + n] * J[c * m + k];
    }
    out[k] = s;
  }
}

void wedge_node(std::span<const double> J, int n, int m, double* W) {
  for (int k = 0; k < m; ++k) {
    W[k * m + k] = 0.0;
    for (int l = k + 1; l < m; ++l) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        s += J[c * m + k] * J[(c + n) * m + l] - J[c * m + l] * J[(c + n) * m + k];
      }
      W[k * m + l] = s;
      W[l * m + k] = -s;
    }
  }
}

void require_b_shape(const Eigen::MatrixXd& B) {
  if (B.rows() < 2 || B.rows() % 2 != 0 || B.cols() < 1) {
    throw InvalidArgument("expected a 2n x m matrix, got " + std::to_string(B.rows()) + " x " +
                          std::to_string(B.cols()));
  }
}

}  // namespace

ContactResidualField contact_residual(const JetField& j) {
  const int m = j.domain.m();
  if (static_cast<std::size_t>(j.components()) * m * j.domain.size() != j.jac.size()) {
    throw InvalidArgument("contact_residual: jet field shape mismatch");
  }
  ContactResidualField out{j.domain, std::vector<double>(j.domain.size() * m), j.interior};
  const auto total = static_cast<std::int64_t>(j.domain.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) residual_node(j, static_cast<std::size_t>(i), out.residual.data() + i * m);
  return out;
}

WedgeField wedge_field(const JetField& j) {
  const int m = j.domain.m();
  const int n = j.dim.n();
  WedgeField out{j.domain, std::vector<double>(j.domain.size() * m * m), j.interior};
  const auto total = static_cast<std::int64_t>(j.domain.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) {
    wedge_node(j.jacobian(static_cast<std::size_t>(i)), n, m, out.wedge.data() + i * m * m);
  }
  return out;
}

Eigen::MatrixXd wedge_sum(const Eigen::MatrixXd& B) {
  require_b_shape(B);
  const int n = static_cast<int>(B.rows() / 2);
  const int m = static_cast<int>(B.cols());
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += B(c, k) * B(c + n, l) - B(c, l) * B(c + n, k);
      W(k, l) = s;
      W(l, k) = -s;
    }
  }
  return W;
}

double j_pairing_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                          const Eigen::MatrixXd& J) {
  require_b_shape(B);
  if (v.size() != B.cols() || w.size() != B.cols()) throw InvalidArgument("j_pairing: vector length must equal m");
  if (J.rows() != B.rows() || J.cols() != B.rows()) throw InvalidArgument("j_pairing: J must be 2n x 2n");
  const double lhs = (B * w).dot(J * (B * v));
  const Eigen::MatrixXd W = wedge_sum(B);
  double rhs = 0.0;
  for (Eigen::Index k = 0; k < B.cols(); ++k)
    for (Eigen::Index l = 0; l < B.cols(); ++l) rhs += w(k) * v(l) * W(l, k);
  return std::abs(lhs - rhs);
}

double j_pairing_check(const Eigen::MatrixXd& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  require_b_shape(B);
  return j_pairing_residual(B, v, w, symplectic_j(static_cast<int>(B.rows() / 2)));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::WedgeNullRankLeqN: return "WedgeNullRankLeqN";
    case Verdict::WedgeNonzero: return "WedgeNonzero";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

double default_wedge_tolerance(const Eigen::MatrixXd& B) {
  const double b = B.size() ? B.cwiseAbs().maxCoeff() : 0.0;
  return 1e-10 * (1.0 + b * b);
}

std::vector<double> singular_values(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return {};
  if (!M.allFinite()) throw NumericalFailure("SVD of a matrix with non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int numerical_rank(const Eigen::MatrixXd& M, double tau) {
  const auto s = singular_values(M);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) { return x > tau * s.front(); }));
}

RankCertificate rank_certificate(const Eigen::MatrixXd& B, double tol_wedge, double tol_rank) {
  require_b_shape(B);
  if (!(tol_wedge > 0.0) || !(tol_rank > 0.0)) throw InvalidArgument("rank_certificate: tolerances must be positive");
  const int n = static_cast<int>(B.rows() / 2);
  RankCertificate cert;
  cert.tol_wedge = tol_wedge;
  cert.tol_rank = tol_rank;
  cert.singular_values = singular_values(B);
  const auto& s = cert.singular_values;
  const double s1 = s.empty() ? 0.0 : s.front();
  cert.numerical_rank = s1 == 0.0 ? 0 : static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) {
                                         return x > tol_rank * s1;
                                       }));
  const Eigen::MatrixXd W = wedge_sum(B);
  cert.wedge_norm = W.size() ? W.cwiseAbs().maxCoeff() : 0.0;
  if (cert.wedge_norm <= tol_wedge) {
    const double s_next = static_cast<int>(s.size()) > n ? s[n] : 0.0;
    cert.verdict = (s_next <= tol_rank * s1) ? Verdict::WedgeNullRankLeqN : Verdict::Indeterminate;
  } else {
    cert.verdict = Verdict::WedgeNonzero;
  }
  return cert;
}

RankCertificate rank_certificate(const Eigen::MatrixXd& B) {
  return rank_certificate(B, default_wedge_tolerance(B), kDefaultRankTolerance);
}

namespace detail {

Eigen::MatrixXd horizontal_block(const JetField& j, std::size_t node) {
  const int n = j.dim.n();
  const int m = j.domain.m();
  const auto J = j.jacobian(node);
  Eigen::MatrixXd B(2 * n, m);
  for (int c = 0; c < 2 * n; ++c)
    for (int k = 0; k < m; ++k) B(c, k) = J[c * m + k];
  return B;
}

void scan_node(const JetField& j, const ScanTolerances& tol, std::size_t node, NodeScan& out) {
  const int n = j.dim.n();
  const int m = j.domain.m();
  std::vector<double> rho(m), W(static_cast<std::size_t>(m) * m);
  residual_node(j, node, rho.data());
  wedge_node(j.jacobian(node), n, m, W.data());
  double r2 = 0.0;
  for (double v : rho) r2 += v * v;
  double wmax = 0.0;
  for (double v : W) wmax = std::max(wmax, std::abs(v));
  out.residual_norm[node] = std::sqrt(r2);
  out.wedge_max[node] = wmax;
  out.rank_horizontal[node] = numerical_rank(horizontal_block(j, node), tol.rank);
  out.rank_full[node] = numerical_rank(j.jacobian_matrix(node), tol.rank);
  out.interior[node] = j.interior[node];
}

}  // namespace detail

NodeScan scan_nodes(const JetField& j, const ScanTolerances& tol) {
  const std::size_t N = j.domain.size();
  NodeScan out{std::vector<double>(N), std::vector<double>(N), std::vector<int>(N), std::vector<int>(N),
               std::vector<unsigned char>(N)};
  const auto total = static_cast<std::int64_t>(N);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < total; ++i) detail::scan_node(j, tol, static_cast<std::size_t>(i), out);
  return out;
}

LowRankSummary summarize_lowrank(const NodeScan& scan, int n) {
  LowRankSummary s;
  std::size_t low = 0;
  for (std::size_t i = 0; i < scan.interior.size(); ++i) {
    if (!scan.interior[i]) continue;
    ++s.interior_nodes;
    if (scan.rank_horizontal[i] <= n) ++low;
    s.max_residual = std::max(s.max_residual, scan.residual_norm[i]);
    s.max_wedge = std::max(s.max_wedge, scan.wedge_max[i]);
  }
  s.lowrank_fraction = s.interior_nodes ? static_cast<double>(low) / static_cast<double>(s.interior_nodes) : 0.0;
  return s;
}

double summarize_maxrank(const NodeScan& scan, int m) {
  std::size_t interior = 0, full = 0;
  for (std::size_t i = 0; i < scan.interior.size(); ++i) {
    if (!scan.interior[i]) continue;
    ++interior;
    if (scan.rank_full[i] == m) ++full;
  }
  return interior ? static_cast<double>(full) / static_cast<double>(interior) : 0.0;
}

LowRankSummary lowrank_scan(const JetField& j, const ScanTolerances& tol) {
  return summarize_lowrank(scan_nodes(j, tol), j.dim.n());
}

double maxrank_scan(const JetField& j, double tol) {
  if (j.domain.m() > j.components()) throw InvalidArgument("maxrank_scan: requires m <= 2n+1");
  return summarize_maxrank(scan_nodes(j, ScanTolerances{tol}), j.domain.m());
}

std::vector<double> bv_graph_tangency(const ScalarGrid& g) {
  if (g.domain.m() != 2) throw InvalidArgument("bv_graph_tangency: expects a planar grid");
  std::vector<double> dev = gradient_fd(g);
  std::vector<double> x(2);
  for (std::size_t i = 0; i < g.domain.size(); ++i) {
    g.domain.coords(i, x);
    dev[2 * i + 0] -= -x[1];
    dev[2 * i + 1] -= x[0];
  }
  return dev;
}

}  // namespace heislab
