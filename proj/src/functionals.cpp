#include "sasaki/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sasaki/errors.hpp"

namespace sasaki {
namespace {

// Volume ratio of base + phi relative to the reference, checked admissible.
Field target_ratio(const BasicPotential& phi, const MetricState& base) {
  require_same_grid(phi.grid, base.grid());
  const Field r = base.ratio() + 0.25 * basic_laplacian(phi.values, *base.grid());
  const double margin = r.minCoeff();
  if (!(margin > 0.0)) {
    throw DomainError("potential is not admissible over the base, min ratio " +
                          std::to_string(margin),
                      margin);
  }
  return r;
}

double mean_scalar(const MetricState& s) { return 2.0 * s.m() * (s.m() + 1.0); }

}  // namespace

double eval_I(const BasicPotential& phi, const MetricState& base) {
  const Field r = target_ratio(phi, base);
  return base.grid()->integrate(phi.values.cwiseProduct(base.ratio() - r));
}

double eval_J(const BasicPotential& phi, const MetricState& base, int s_nodes) {
  const Quadrature q = gauss_legendre_unit(s_nodes);
  double sum = 0.0;
  for (int j = 0; j < s_nodes; ++j) {
    const double s = q.nodes(j);
    sum += q.weights(j) * eval_I(phi * s, base) / s;
  }
  return sum;
}

FValues eval_F(const BasicPotential& phi, const MetricState& base, int s_nodes) {
  FValues out;
  const double m1 = base.m() + 1.0;
  out.F0 = eval_J(phi, base, s_nodes) - base.integrate(phi.values);
  const Field expo = base.ricci_potential() - m1 * phi.values + base.log_ratio();
  out.F = out.F0 - log_integral_exp(expo, *base.grid()) / m1;
  return out;
}

double eval_K_energy(const BasicPotential& phi, const MetricState& base, int path_nodes,
                     PathShape shape) {
  const Quadrature q = gauss_legendre_unit(path_nodes);
  const double sbar = mean_scalar(base);
  double sum = 0.0;
  for (int j = 0; j < path_nodes; ++j) {
    const double t = q.nodes(j);
    double pos = t;
    double vel = 1.0;
    if (shape == PathShape::quadratic) {
      pos = t * t;
      vel = 2.0 * t;
    }
    const MetricState st = deform(base, phi * pos);
    const Field excess = st.scalar_curvature().array() - sbar;
    sum += q.weights(j) * vel * st.integrate(phi.values.cwiseProduct(excess));
  }
  return -sum;
}

FunctionalLedger evaluate_ledger(const BasicPotential& phi, const MetricState& base,
                                 std::string tag, bool with_K) {
  FunctionalLedger l;
  l.tag = std::move(tag);
  l.margin = target_ratio(phi, base).minCoeff();
  l.I = eval_I(phi, base);
  l.J = eval_J(phi, base);
  const FValues f = eval_F(phi, base);
  l.F0 = f.F0;
  l.F = f.F;
  l.K = with_K ? eval_K_energy(phi, base) : 0.0;
  l.osc = phi.oscillation();
  return l;
}

double CocycleReport::max_abs() const {
  return std::max({std::abs(F_cocycle), std::abs(F_antisym), std::abs(F0_cocycle),
                   std::abs(F0_antisym)});
}

CocycleReport verify_cocycle(const BasicPotential& psi, const BasicPotential& phi,
                             const MetricState& base) {
  const MetricState shifted = deform(base, psi);
  const FValues f_psi = eval_F(psi, base);
  const FValues f_phi = eval_F(phi, base);
  const FValues f_step = eval_F(phi - psi, shifted);
  const FValues f_back = eval_F(-psi, shifted);
  CocycleReport r;
  r.F_cocycle = f_psi.F + f_step.F - f_phi.F;
  r.F_antisym = f_psi.F + f_back.F;
  r.F0_cocycle = f_psi.F0 + f_step.F0 - f_phi.F0;
  r.F0_antisym = f_psi.F0 + f_back.F0;
  return r;
}

double SandwichReport::min_slack() const {
  return std::min({slack_I_nonneg, slack_J_nonneg, slack_lower, slack_upper});
}

SandwichReport verify_ij_sandwich(const BasicPotential& phi, const MetricState& base) {
  SandwichReport r;
  const double m = base.m();
  r.I = eval_I(phi, base);
  r.J = eval_J(phi, base);
  r.slack_I_nonneg = r.I;
  r.slack_J_nonneg = r.J;
  r.slack_lower = (m + 1.0) * (r.I - r.J) - r.I;
  r.slack_upper = m * r.I - (m + 1.0) * (r.I - r.J);
  return r;
}

ShiftBoundReport verify_shift_bound(const BasicPotential& phi, const BasicPotential& psi,
                                    const MetricState& base) {
  const MetricState shifted = deform(base, psi);
  ShiftBoundReport r;
  r.lhs = std::abs(eval_I(phi - psi, shifted) - eval_I(phi, base));
  r.bound = (base.m() + 1.0) * psi.oscillation();
  return r;
}

MabuchiFReport verify_mabuchi_f_relation(const BasicPotential& phi, const MetricState& base,
                                         int path_nodes) {
  const MetricState target = deform(base, phi);
  MabuchiFReport r;
  r.K = eval_K_energy(phi, base, path_nodes);
  r.F = eval_F(phi, base).F;
  r.h_base = base.integrate(base.ricci_potential());
  r.h_target = target.integrate(target.ricci_potential());
  const double m1 = base.m() + 1.0;
  r.residual = r.K - 2.0 * m1 * r.F - 2.0 * (r.h_base - r.h_target);
  r.inequality_slack = r.K - 2.0 * m1 * r.F - 2.0 * r.h_base;
  return r;
}

OscBoundReport osc_bound_report(const BasicPotential& phi, const MetricState& base,
                                double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("Ricci lower bound must be positive");
  const MetricState target = deform(base, phi);
  OscBoundReport r;
  r.epsilon = epsilon;
  r.min_scalar = target.scalar_curvature().minCoeff();
  if (r.min_scalar < epsilon) {
    throw DomainError("Ricci lower bound fails, min scalar curvature " +
                          std::to_string(r.min_scalar),
                      r.min_scalar - epsilon);
  }
  r.osc = phi.oscillation();
  r.I = eval_I(phi, base);
  r.excess = r.osc - r.I;
  const double delta = target.laplacian(phi.values).maxCoeff();
  if (delta > 0.0) {
    const double lhs = -phi.values.minCoeff();
    const double avg = target.integrate(-phi.values);
    r.prop_constant = std::max(0.0, lhs - avg) * epsilon / delta;
  }
  return r;
}

}  // namespace sasaki
