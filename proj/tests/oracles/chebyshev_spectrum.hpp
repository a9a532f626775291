#pragma once

// Eigenvalues of 4[(1 - x^2) f'' - 2x f'] by Chebyshev-Lobatto collocation.
// The operator preserves polynomial degree, so the collocation matrix is the
// operator restricted to degree <= N and no boundary rows are needed.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd chebyshev_diff(int N, Eigen::VectorXd& x) {
  x.resize(N + 1);
  for (int j = 0; j <= N; ++j) x(j) = std::cos(std::numbers::pi * j / N);
  Eigen::VectorXd c = Eigen::VectorXd::Ones(N + 1);
  c(0) = c(N) = 2.0;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      D(i, j) = (c(i) / c(j)) * (((i + j) % 2) ? -1.0 : 1.0) / (x(i) - x(j));
    }
  }
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  return D;
}

/// Eigenvalues sorted descending.
inline std::vector<double> legendre_operator_spectrum(int N) {
  Eigen::VectorXd x;
  const Eigen::MatrixXd D = chebyshev_diff(N, x);
  const Eigen::MatrixXd D2 = D * D;
  Eigen::MatrixXd A(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    A.row(i) = 4.0 * ((1.0 - x(i) * x(i)) * D2.row(i) - 2.0 * x(i) * D.row(i));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<double> ev;
  for (int i = 0; i <= N; ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace oracle
