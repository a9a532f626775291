#pragma once

#include <string>

#include "sasaki/metric.hpp"

namespace sasaki {

// Energy functionals of a potential phi measured relative to a base
// structure. All integrals are against normalized measures. phi must be
// admissible over the base (base.potential() + phi admissible); otherwise
// DomainError propagates.

double eval_I(const BasicPotential& phi, const MetricState& base);

/// J = \int_0^1 I(s phi) / s ds by Gauss quadrature in s.
double eval_J(const BasicPotential& phi, const MetricState& base, int s_nodes = 32);

struct FValues {
  double F0 = 0.0;
  double F = 0.0;
};

FValues eval_F(const BasicPotential& phi, const MetricState& base, int s_nodes = 32);

enum class PathShape {
  linear,     // phi_t = t phi
  quadratic,  // phi_t = t^2 phi
};

/// Mabuchi K-energy -\int_0^1 \int phi_t' (S_t - Sbar) d mu_t dt along the
/// given path from the base to base + phi.
double eval_K_energy(const BasicPotential& phi, const MetricState& base,
                     int path_nodes = 48, PathShape shape = PathShape::linear);

struct FunctionalLedger {
  std::string tag;
  double I = 0.0;
  double J = 0.0;
  double F0 = 0.0;
  double F = 0.0;
  double K = 0.0;
  double osc = 0.0;
  double margin = 0.0;  // min volume ratio of base + phi
};

FunctionalLedger evaluate_ledger(const BasicPotential& phi, const MetricState& base,
                                 std::string tag = {}, bool with_K = true);

struct CocycleReport {
  double F_cocycle = 0.0;    // F(psi) + F_psi(phi - psi) - F(phi)
  double F_antisym = 0.0;    // F(psi) + F_psi(-psi)
  double F0_cocycle = 0.0;
  double F0_antisym = 0.0;
  double max_abs() const;
};

CocycleReport verify_cocycle(const BasicPotential& psi, const BasicPotential& phi,
                             const MetricState& base);

struct SandwichReport {
  double I = 0.0;
  double J = 0.0;
  // Each slack is >= 0 when the inequality holds.
  double slack_I_nonneg = 0.0;
  double slack_J_nonneg = 0.0;
  double slack_lower = 0.0;  // (m+1)(I - J) - I
  double slack_upper = 0.0;  // m I - (m+1)(I - J)
  double min_slack() const;
  bool holds(double tol = 1e-12) const { return min_slack() >= -tol; }
};

SandwichReport verify_ij_sandwich(const BasicPotential& phi, const MetricState& base);

struct ShiftBoundReport {
  double lhs = 0.0;    // |I_{base+psi}(phi - psi) - I_base(phi)|
  double bound = 0.0;  // (m+1) Osc(psi)
  double slack() const { return bound - lhs; }
  bool holds(double tol = 1e-12) const { return lhs <= bound + tol; }
};

/// Compares I of the same target structure seen from base and from the
/// shifted base + psi.
ShiftBoundReport verify_shift_bound(const BasicPotential& phi, const BasicPotential& psi,
                                    const MetricState& base);

struct MabuchiFReport {
  double K = 0.0;
  double F = 0.0;
  double h_base = 0.0;    // \int h_base d mu_base
  double h_target = 0.0;  // \int h_phi d mu_phi
  double residual = 0.0;  // K - 2(m+1) F - 2(h_base - h_target)
  double inequality_slack = 0.0;  // K - 2(m+1) F - 2 h_base = -2 h_target
};

MabuchiFReport verify_mabuchi_f_relation(const BasicPotential& phi, const MetricState& base,
                                         int path_nodes = 48);

struct OscBoundReport {
  double epsilon = 0.0;
  double min_scalar = 0.0;  // Ric^T >= eps g^T holds iff min S^T >= eps at m = 1
  double osc = 0.0;
  double I = 0.0;
  double excess = 0.0;  // Osc - I, bounded by C(m)/eps + C(M, g)
  /// Smallest C(m) with -inf phi <= \int (-phi) d mu_phi + C(m) delta / eps on
  /// the target structure, delta = sup Delta_phi phi (< 4m by admissibility
  /// of the base). Zero when delta <= 0.
  double prop_constant = 0.0;
};

/// Throws DomainError when the Ricci lower bound fails; the margin carried is
/// min S^T - eps.
OscBoundReport osc_bound_report(const BasicPotential& phi, const MetricState& base,
                                double epsilon);

}  // namespace sasaki
