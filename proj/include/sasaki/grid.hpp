#pragma once

#include <memory>

#include <Eigen/Dense>

namespace sasaki {

using Field = Eigen::VectorXd;

/// Gauss-Legendre collocation grid on the moment coordinate x in (-1, 1).
///
/// The weights integrate against the normalized measure dx/2, so they sum to
/// one. Differentiation matrices are those of the degree n - 1 interpolant
/// through the nodes, built in barycentric form. The Legendre table gives the
/// modal view: p_k = sqrt(2k+1) P_k, orthonormal under the weights.
class Grid {
 public:
  /// Degree up to which the quadrature is exact.
  int exact_degree() const { return 2 * n_ - 1; }
  int size() const { return n_; }

  const Field& nodes() const { return nodes_; }
  const Field& weights() const { return weights_; }

  /// Normalized Legendre values, legendre()(i, k) = p_k(x_i).
  const Eigen::MatrixXd& legendre() const { return legendre_; }

  /// First and second derivative matrices.
  const Eigen::MatrixXd& d1() const { return d1_; }
  const Eigen::MatrixXd& d2() const { return d2_; }

  /// Basic Laplacian of the round curvature-4 quotient,
  /// 4 d/dx[(1 - x^2) d/dx], diagonal in the Legendre basis.
  const Eigen::MatrixXd& round_laplacian() const { return laplacian_; }

  /// Legendre coefficients of a sampled field.
  Field analyze(const Field& f) const;
  /// Evaluate a Legendre expansion at an arbitrary point.
  static double evaluate(const Field& coeffs, double x);

  /// Quadrature of f against dx/2 with a fixed summation order.
  double integrate(const Field& f) const;

  friend std::shared_ptr<const Grid> make_grid(int n);

 private:
  Grid() = default;

  int n_ = 0;
  Field nodes_;
  Field weights_;
  Eigen::MatrixXd legendre_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
  Eigen::MatrixXd laplacian_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Gauss-Legendre rule on [0, 1]; weights sum to one. Any k >= 1.
struct Quadrature {
  Field nodes;    // ascending
  Field weights;
};
Quadrature gauss_legendre_unit(int k);

/// Builds an n-point grid. Throws ConfigError for n < 8.
GridPtr make_grid(int n);

/// Throws GridMismatch unless both handles point at the same grid.
void require_same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace sasaki
