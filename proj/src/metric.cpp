#include "sasaki/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sasaki/errors.hpp"

namespace sasaki {

BasicPotential BasicPotential::zero(GridPtr grid) {
  const int n = grid->size();
  return {std::move(grid), Field::Zero(n)};
}

BasicPotential BasicPotential::constant(GridPtr grid, double c) {
  const int n = grid->size();
  return {std::move(grid), Field::Constant(n, c)};
}

BasicPotential BasicPotential::sample(GridPtr grid,
                                      const std::function<double(double)>& f) {
  Field v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v(i) = f(grid->nodes()(i));
  if (!v.allFinite()) throw DomainError("sampled potential is not finite", 0.0);
  return {std::move(grid), std::move(v)};
}

BasicPotential BasicPotential::operator+(const BasicPotential& other) const {
  require_same_grid(grid, other.grid);
  return {grid, values + other.values};
}

BasicPotential BasicPotential::operator-(const BasicPotential& other) const {
  require_same_grid(grid, other.grid);
  return {grid, values - other.values};
}

BasicPotential BasicPotential::operator-() const { return {grid, -values}; }

BasicPotential BasicPotential::operator*(double s) const {
  return {grid, values * s};
}

BasicPotential BasicPotential::operator+(double c) const {
  return {grid, values.array() + c};
}

Field basic_laplacian(const Field& f, const Grid& grid) {
  if (f.size() != grid.size()) throw GridMismatch("field size differs from grid");
  return grid.round_laplacian() * f;
}

Field volume_ratio(const BasicPotential& phi) {
  return (basic_laplacian(phi.values, *phi.grid) * 0.25).array() + 1.0;
}

Admissibility admissibility(const BasicPotential& phi) {
  Admissibility a;
  if (!phi.values.allFinite()) {
    a.margin = -std::numeric_limits<double>::infinity();
    return a;
  }
  a.margin = volume_ratio(phi).minCoeff();
  a.admissible = a.margin > 0.0;
  return a;
}

double log_integral_exp(const Field& f, const Grid& grid) {
  const double top = f.maxCoeff();
  const Field e = (f.array() - top).exp();
  return top + std::log(grid.integrate(e));
}

MetricState metric_state(const BasicPotential& phi, int m) {
  if (m != 1) {
    throw ConfigError("PDE-backed metric data needs m = 1, got m = " +
                      std::to_string(m));
  }
  if (!phi.grid) throw ConfigError("potential has no grid");
  const Grid& grid = *phi.grid;
  if (phi.values.size() != grid.size()) {
    throw GridMismatch("potential size differs from grid");
  }
  if (!phi.values.allFinite()) {
    throw DomainError("potential is not finite", 0.0);
  }

  MetricState s;
  s.m_ = m;
  s.potential_ = phi;
  s.laplacian_ref_ = basic_laplacian(phi.values, grid);
  s.ratio_ = (s.laplacian_ref_ * 0.25).array() + 1.0;
  const double margin = s.ratio_.minCoeff();
  if (!(margin > 0.0)) {
    throw DomainError("potential is not admissible, min ratio " +
                          std::to_string(margin),
                      margin);
  }
  s.log_ratio_ = s.ratio_.array().log();

  // Conformal change of the curvature-4 quotient: K r = 4 - (1/2) Delta log r.
  const Field lap_log = grid.round_laplacian() * s.log_ratio_;
  s.scalar_ = (4.0 - 0.5 * lap_log.array()) / s.ratio_.array();

  // h = -log r - (m+1) phi + c with \int e^h r d mu_ref = e^c \int e^{-(m+1)phi}.
  const Field damped = -(m + 1.0) * phi.values;
  s.norm_constant_ = -log_integral_exp(damped, grid);
  s.ricci_ = -s.log_ratio_ + damped;
  s.ricci_.array() += s.norm_constant_;
  return s;
}

Field MetricState::laplacian(const Field& f) const {
  return (basic_laplacian(f, *grid()).array() / ratio_.array()).matrix();
}

Field MetricState::gradient_norm2(const Field& f) const {
  const Grid& g = *grid();
  if (f.size() != g.size()) throw GridMismatch("field size differs from grid");
  const Field df = g.d1() * f;
  const auto x = g.nodes().array();
  return (4.0 * (1.0 - x * x) * df.array().square() / ratio_.array()).matrix();
}

double MetricState::integrate(const Field& f) const {
  if (f.size() != grid()->size()) {
    throw GridMismatch("field size differs from grid");
  }
  return grid()->integrate(f.cwiseProduct(ratio_));
}

MetricState reference_state(const GridPtr& grid) {
  return metric_state(BasicPotential::zero(grid), 1);
}

MetricState deform(const MetricState& base, const BasicPotential& phi) {
  return metric_state(base.potential() + phi, base.m());
}

Field basic_laplacian(const Field& f, const MetricState& state) {
  return state.laplacian(f);
}

double integrate(const Field& f, const MetricState& state) {
  return state.integrate(f);
}

double integrate(const Field& f, const Grid& grid) {
  if (f.size() != grid.size()) throw GridMismatch("field size differs from grid");
  return grid.integrate(f);
}

Spectrum spectrum(const MetricState& state, int k, double tol) {
  const Grid& g = *state.grid();
  const int n = g.size();
  if (k < 1) throw ConfigError("spectrum needs k >= 1");
  if (k > n / 4) {
    throw ResolutionError("grid of " + std::to_string(n) +
                          " nodes resolves at most " + std::to_string(n / 4) +
                          " eigenvalues");
  }
  // Delta_phi v = lambda v  <=>  W L v = lambda W R v, a symmetric pencil.
  const Eigen::MatrixXd wl = g.weights().asDiagonal() * g.round_laplacian();
  const Eigen::MatrixXd a = 0.5 * (wl + wl.transpose());
  const Eigen::MatrixXd b =
      g.weights().cwiseProduct(state.ratio()).asDiagonal().toDenseMatrix();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ResolutionError("generalized eigensolve failed");
  }
  const Field& ev = solver.eigenvalues();  // ascending

  Spectrum out;
  for (int i = n - 1; i >= n - k; --i) {
    const double lam = ev(i);
    if (!out.entries.empty()) {
      auto& last = out.entries.back();
      if (std::abs(last.eigenvalue - lam) <=
          1e-8 * std::max(1.0, std::abs(lam))) {
        ++last.multiplicity;
        continue;
      }
    }
    out.entries.push_back({lam, 1});
  }

  const double target = -4.0 * (state.m() + 1.0);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = n - n / 4; i < n; ++i) {
    gap = std::min(gap, std::abs(ev(i) - target));
  }
  out.obstruction_gap = gap;
  out.obstruction = gap <= tol * std::abs(target);
  return out;
}

double quotient_distance(double x, double y) {
  return 0.5 * std::abs(std::acos(std::clamp(x, -1.0, 1.0)) -
                        std::acos(std::clamp(y, -1.0, 1.0)));
}

}  // namespace sasaki
