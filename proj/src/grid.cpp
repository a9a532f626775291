#include "sasaki/grid.hpp"

#include <cmath>
#include <numbers>
#include <vector>
#include <string>

#include "sasaki/errors.hpp"

namespace sasaki {
namespace {

struct LegendreValue {
  double p;
  double dp;
};

// Unnormalized P_n(x) and P_n'(x) by the three-term recurrence.
LegendreValue legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

// Gauss-Legendre nodes on (-1, 1), ascending, weights normalized to sum 1.
Quadrature gauss_legendre_symmetric(int k) {
  Quadrature q;
  q.nodes.resize(k);
  q.weights.resize(k);
  // Newton on P_k from Chebyshev-like guesses; roots come out descending.
  for (int i = 0; i < k; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(k, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(k, x).dp;
    q.nodes(k - 1 - i) = x;
    q.weights(k - 1 - i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  q.weights /= q.weights.sum();
  return q;
}

}  // namespace

Quadrature gauss_legendre_unit(int k) {
  if (k < 1) throw ConfigError("quadrature needs at least one node");
  Quadrature q = gauss_legendre_symmetric(k);
  q.nodes = 0.5 * (q.nodes.array() + 1.0);
  return q;
}

GridPtr make_grid(int n) {
  if (n < 8) {
    throw ConfigError("grid needs at least 8 nodes, got " + std::to_string(n));
  }
  std::shared_ptr<Grid> g(new Grid());
  g->n_ = n;
  Quadrature q = gauss_legendre_symmetric(n);
  g->nodes_ = std::move(q.nodes);
  g->weights_ = std::move(q.weights);

  // Normalized Legendre values on the nodes.
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = g->nodes_(i);
    std::vector<double> p(n);
    p[0] = 1.0;
    p[1] = x;
    for (int k = 1; k + 1 < n; ++k) {
      p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
    }
    for (int k = 0; k < n; ++k) P(i, k) = std::sqrt(2.0 * k + 1.0) * p[k];
  }
  g->legendre_ = P;

  // Differentiation through barycentric Lagrange interpolation on the nodes.
  // Diagonals come from the negative-sum rule so constants map to zero; this
  // keeps roundoff near eps * n^2 instead of the larger growth of the modal
  // route.
  Field bw(n);
  for (int i = 0; i < n; ++i) {
    const double x = g->nodes_(i);
    bw(i) = std::sqrt((1.0 - x * x) * g->weights_(i)) * ((i % 2) ? -1.0 : 1.0);
  }
  const Field& x = g->nodes_;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (bw(j) / bw(i)) / (x(i) - x(j));
      s += D(i, j);
    }
    D(i, i) = -s;
  }
  Eigen::MatrixXd D2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D2(i, j) = 2.0 * D(i, j) * (D(i, i) - 1.0 / (x(i) - x(j)));
      s += D2(i, j);
    }
    D2(i, i) = -s;
  }
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i) {
    L.row(i) = 4.0 * ((1.0 - x(i) * x(i)) * D2.row(i) - 2.0 * x(i) * D.row(i));
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) s += L(i, j);
    }
    L(i, i) = -s;
  }
  g->d1_ = std::move(D);
  g->d2_ = std::move(D2);
  g->laplacian_ = std::move(L);
  return g;
}

Field Grid::analyze(const Field& f) const {
  return legendre_.transpose() * weights_.cwiseProduct(f);
}

double Grid::evaluate(const Field& coeffs, double x) {
  double value = 0.0;
  double p0 = 1.0;
  double p1 = x;
  const int n = static_cast<int>(coeffs.size());
  for (int k = 0; k < n; ++k) {
    double pk;
    if (k == 0) {
      pk = 1.0;
    } else if (k == 1) {
      pk = x;
    } else {
      pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    value += coeffs(k) * std::sqrt(2.0 * k + 1.0) * pk;
  }
  return value;
}

double Grid::integrate(const Field& f) const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) sum += weights_(i) * f(i);
  return sum;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a.get() != b.get()) throw GridMismatch("fields live on different grids");
}

}  // namespace sasaki
