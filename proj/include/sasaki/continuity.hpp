#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sasaki/functionals.hpp"

namespace sasaki {

/// Potential of the pullback of the round structure under z -> lambda z,
/// log(((lambda^2 + 1) + (lambda^2 - 1) x) / 2) shifted to zero grid mean.
/// Throws DomainError for lambda <= 0.
BasicPotential mobius_potential(const GridPtr& grid, double lambda);

/// eps (3x^2 - 1) / 2; admissible for eps < 1/6.
BasicPotential legendre_bump(const GridPtr& grid, double eps);

/// r_base(phi) - exp(h_base - t (m+1) phi), r_base the ratio of base + phi
/// over base.
Field ma_defect(const BasicPotential& phi, double t, const MetricState& base);

/// Derivative of ma_defect with respect to phi (dense, n x n).
Eigen::MatrixXd ma_defect_jacobian(const BasicPotential& phi, double t,
                                   const MetricState& base);

struct NewtonConfig {
  double tol = 1e-10;         // sup-norm of the defect
  int max_iter = 50;
  double min_margin = 1e-6;   // smallest volume ratio a trial step may reach
  double armijo = 1e-4;
  int max_halvings = 40;
};

struct NewtonResult {
  BasicPotential phi;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // sup-norm defect per iterate
};

/// Newton on log r_base(phi) - h_base + t(m+1) phi with an exact Jacobian and
/// backtracking. At t = 1 the Jacobian may be singular (holomorphic fields);
/// the step is then taken in the complement of its kernel. Throws SolverError
/// with the residual trace on failure, DomainError if the guess is not
/// admissible.
NewtonResult solve_ma_at_t(double t, const MetricState& base,
                           const BasicPotential& guess, const NewtonConfig& config = {});

struct PathPolicy {
  double t_start = 0.1;
  double t_end = 1.0;
  double dt = 0.05;       // initial and maximal step
  double dt_min = 1e-4;   // halving floor
  NewtonConfig newton;
  bool with_K = true;
};

struct PathRecord {
  double t = 0.0;
  BasicPotential phi;
  FunctionalLedger ledger;
  double residual = 0.0;
  double c0_norm = 0.0;
  double identity_residual = 0.0;  // sup |S_t - 2(m+1)(m - (1-t) Delta_t phi_t / 4)|
};

struct ContinuityPath {
  std::vector<PathRecord> records;
  bool complete = false;
  double failed_at = 0.0;  // t that could not be reached, when incomplete
  std::string failure;
  PathPolicy policy;
};

ContinuityPath run_continuity_path(const MetricState& base, const PathPolicy& policy = {});

struct PathDiagnostics {
  double min_increment = 0.0;     // min over steps of (I-J)(t_{k+1}) - (I-J)(t_k)
  double max_identity_residual = 0.0;
  double fitted_C1 = 0.0;         // max F t / (1-t) over t < 1
  bool reaches_one = false;
  double F_einstein = 0.0;        // F at the endpoint structure of -phi_1
  double ij_integral = 0.0;       // \int_0^1 (I - J)(phi_s) ds
  double integral_residual = 0.0; // |F_einstein - ij_integral|
  double j_pair_slack = 0.0;      // min Osc(phi_a - phi_b) - |J_a - J_b|
  double ij_pair_slack = 0.0;     // min m Osc - |(I-J)_a - (I-J)_b|
  double alpha = 0.0;
  std::vector<double> f_values;   // f(t) per record
  double fitted_A = 0.0;          // min A with ||phi_1 - phi_t|| <= A(1-t)||phi_t|| + 1
};

/// The head segment [0, t_start] of the (I-J) integral is computed from extra
/// solves at Gauss nodes in t, so the base must be the path's base.
PathDiagnostics path_diagnostics(const ContinuityPath& path, const MetricState& base,
                                 int head_nodes = 6);

struct PotentialFamily {
  std::string name;
  std::vector<double> params;
  std::function<BasicPotential(double)> make;
};

struct ScanRow {
  std::string family;
  double param = 0.0;
  double I = 0.0;
  double J = 0.0;
  double F = 0.0;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  double C1 = 0.0;  // least squares F ~ C1 J - C2
  double C2 = 0.0;
};

ScanReport mt_scan(const std::vector<PotentialFamily>& families, const MetricState& base);

PotentialFamily mobius_family(const GridPtr& grid, std::vector<double> lambdas);
PotentialFamily bump_family(const GridPtr& grid, std::vector<double> eps);

}  // namespace sasaki
