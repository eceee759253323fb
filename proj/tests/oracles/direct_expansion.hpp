#pragma once

#include <Eigen/Dense>

// Written against the definitions, not the library code paths.
namespace oracle {

// det [[a, b], [c, d]]
inline double det2(double a, double b, double c, double d) { return a * d - b * c; }

// W_kl = Σ_j det [[B(j,k), B(j,l)], [B(j+n,k), B(j+n,l)]] for every k, l.
inline Eigen::MatrixXd wedge_by_minors(const Eigen::MatrixXd& B) {
  const auto n = B.rows() / 2;
  const auto m = B.cols();
  Eigen::MatrixXd W(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) s += det2(B(j, k), B(j, l), B(j + n, k), B(j + n, l));
      W(k, l) = s;
    }
  return W;
}

// ⟨Bw, J Bv⟩ with J = [[0, −I], [I, 0]] expanded by hand:
// (J a)_j = −a_{j+n}, (J a)_{j+n} = a_j.
inline double symplectic_pairing(const Eigen::MatrixXd& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  const Eigen::VectorXd a = B * v;
  const Eigen::VectorXd b = B * w;
  const auto n = B.rows() / 2;
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) s += b(j) * (-a(j + n)) + b(j + n) * a(j);
  return s;
}

}  // namespace oracle
