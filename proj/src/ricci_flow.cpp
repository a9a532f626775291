#include "sasaki/ricci_flow.hpp"

#include <algorithm>
#include <cmath>

#include "sasaki/errors.hpp"

namespace sasaki {
namespace {

Field ratio_over(const BasicPotential& v, const MetricState& base) {
  require_same_grid(v.grid, base.grid());
  return base.ratio() + 0.25 * basic_laplacian(v.values, *base.grid());
}

// One semi-implicit step; returns false if the result is not admissible.
bool flow_step(BasicPotential& v, const MetricState& base, double ds) {
  const Grid& g = *base.grid();
  const Field r = ratio_over(v, base);
  const Field rhs = flow_rhs(v, base);
  Eigen::MatrixXd a = -0.25 * ds * g.round_laplacian();
  a.diagonal() += r;
  const Field delta = a.partialPivLu().solve(ds * r.cwiseProduct(rhs));
  const Field next = v.values + delta;
  const Field rn = base.ratio() + 0.25 * basic_laplacian(next, g);
  if (!next.allFinite() || !(rn.minCoeff() > 0.0)) return false;
  v.values = next;
  return true;
}

void advance(BasicPotential& v, const MetricState& base, double ds, double ds_min) {
  if (flow_step(v, base, ds)) return;
  if (ds / 2.0 < ds_min) {
    throw SolverError("flow step left the admissible cone", {});
  }
  advance(v, base, ds / 2.0, ds_min);
  advance(v, base, ds / 2.0, ds_min);
}

FlowRecord make_record(double s, const BasicPotential& v, const MetricState& base,
                       double h0_norm, double min_lap_h0) {
  const double m1 = base.m() + 1.0;
  const MetricState st = deform(base, v);
  FlowRecord rec;
  rec.s = s;
  rec.v = v;
  rec.h = st.ricci_potential();
  const Field vdot = flow_rhs(v, base);
  rec.sup_vdot = vdot.cwiseAbs().maxCoeff();
  rec.sup_h = rec.h.cwiseAbs().maxCoeff();
  const Field dh2 =
      rec.h.array().square() + 0.5 * s * st.gradient_norm2(rec.h).array();
  rec.sup_dh2 = dh2.maxCoeff();
  rec.c_s = st.grid()->integrate(vdot + rec.h);

  const double grow = std::exp(m1 * s);
  rec.bound_a_slack = grow * h0_norm - rec.sup_vdot;
  rec.bound_b_slack = 4.0 * grow * grow * h0_norm * h0_norm - rec.sup_dh2;
  rec.bound_c_min = (st.laplacian(rec.h) / grow).minCoeff() - min_lap_h0;
  rec.bound_d_slack = grow * h0_norm - std::abs(rec.c_s);
  rec.S_pinch =
      (st.scalar_curvature().array() - 2.0 * base.m() * m1).abs().maxCoeff();
  rec.holder_h = holder_half(rec.h, *st.grid());
  return rec;
}

}  // namespace

Field flow_rhs(const BasicPotential& v, const MetricState& base) {
  const Field r = ratio_over(v, base);
  const double margin = r.minCoeff();
  if (!(margin > 0.0)) throw DomainError("flow potential is not admissible", margin);
  return (r.array() / base.ratio().array()).log().matrix() + (base.m() + 1.0) * v.values -
         base.ricci_potential();
}

double holder_half(const Field& f, const Grid& grid) {
  const Field& x = grid.nodes();
  double best = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    for (int j = i + 1; j < x.size(); ++j) {
      const double d = quotient_distance(x(i), x(j));
      if (d > 0.0) best = std::max(best, std::abs(f(i) - f(j)) / std::sqrt(d));
    }
  }
  return best;
}

FlowTrajectory run_flow(const MetricState& base, const FlowStepper& stepper) {
  if (!(stepper.ds > 0.0 && stepper.s_end > 0.0 && stepper.ds_min > 0.0)) {
    throw ConfigError("flow step and end time must be positive");
  }
  if (stepper.record_every < 1) throw ConfigError("record_every must be at least 1");

  FlowTrajectory traj;
  traj.stepper = stepper;
  const Field& h0 = base.ricci_potential();
  traj.h0_norm = h0.cwiseAbs().maxCoeff();
  traj.min_laplacian_h0 = base.laplacian(h0).minCoeff();

  BasicPotential v = BasicPotential::zero(base.grid());
  traj.records.push_back(make_record(0.0, v, base, traj.h0_norm, traj.min_laplacian_h0));
  const long steps = std::lround(stepper.s_end / stepper.ds);
  for (long k = 1; k <= steps; ++k) {
    try {
      advance(v, base, stepper.ds, stepper.ds_min);
    } catch (const Error& e) {
      traj.failure = e.what();
      return traj;
    }
    if (k % stepper.record_every == 0 || k == steps) {
      const double s = (k == steps) ? stepper.s_end : static_cast<double>(k) * stepper.ds;
      traj.records.push_back(make_record(s, v, base, traj.h0_norm, traj.min_laplacian_h0));
    }
  }
  traj.complete = true;
  return traj;
}

SmoothingReport smoothing_monitors(const FlowTrajectory& traj, const MetricState& base,
                                   double rel_tol) {
  SmoothingReport rep;
  if (traj.records.empty()) return rep;
  const double m1 = base.m() + 1.0;
  const double h0 = traj.h0_norm;
  bool first = true;
  for (const auto& r : traj.records) {
    const double grow = std::exp(m1 * r.s);
    const double tol_a = rel_tol * std::max(grow * h0, 1e-300);
    const double tol_b = rel_tol * std::max(4.0 * grow * grow * h0 * h0, 1e-300);
    const double tol_c = rel_tol * std::max(1.0, std::abs(traj.min_laplacian_h0));
    if (first) {
      rep.min_a_slack = r.bound_a_slack;
      rep.min_b_slack = r.bound_b_slack;
      rep.min_c = r.bound_c_min;
      rep.min_d_slack = r.bound_d_slack;
      rep.a_holds = rep.b_holds = rep.c_holds = rep.d_holds = true;
      first = false;
    }
    rep.min_a_slack = std::min(rep.min_a_slack, r.bound_a_slack);
    rep.min_b_slack = std::min(rep.min_b_slack, r.bound_b_slack);
    rep.min_c = std::min(rep.min_c, r.bound_c_min);
    rep.min_d_slack = std::min(rep.min_d_slack, r.bound_d_slack);
    rep.a_holds = rep.a_holds && r.bound_a_slack >= -tol_a;
    rep.b_holds = rep.b_holds && r.bound_b_slack >= -tol_b;
    rep.c_holds = rep.c_holds && r.bound_c_min >= -tol_c;
    rep.d_holds = rep.d_holds && r.bound_d_slack >= -tol_a;
    rep.max_holder_h = std::max(rep.max_holder_h, r.holder_h);

    // d/ds vdot = Delta_s vdot / 4 + (m+1) vdot, by a directional difference.
    const Field vdot = flow_rhs(r.v, base);
    const double scale = vdot.cwiseAbs().maxCoeff();
    if (scale > 1e-8) {
      const double eps = 1e-5 / scale;
      const Field fd = (flow_rhs(r.v + BasicPotential{r.v.grid, eps * vdot}, base) -
                        flow_rhs(r.v - BasicPotential{r.v.grid, eps * vdot}, base)) /
                       (2.0 * eps);
      const MetricState st = deform(base, r.v);
      const Field exact = 0.25 * st.laplacian(vdot) + m1 * vdot;
      const double denom = std::max(exact.cwiseAbs().maxCoeff(), 1e-12);
      rep.evolution_residual =
          std::max(rep.evolution_residual, (fd - exact).cwiseAbs().maxCoeff() / denom);
    }
  }
  if (h0 > 0.0) rep.fitted_holder_constant = rep.max_holder_h / h0;

  const auto at_one = std::min_element(
      traj.records.begin(), traj.records.end(),
      [](const FlowRecord& a, const FlowRecord& b) {
        return std::abs(a.s - 1.0) < std::abs(b.s - 1.0);
      });
  rep.v1_norm = at_one->v.sup_norm();
  rep.v1_bound = std::expm1(m1) / m1 * h0;
  const Field r1 = volume_ratio(base.potential() + at_one->v);
  rep.sandwich_held = r1.minCoeff() >= 0.5 && r1.maxCoeff() <= 1.0;
  return rep;
}

PinchResult epsilon_pinching(const MetricState& base, double eps, PathPolicy policy,
                             FlowStepper stepper) {
  if (!(eps > 0.0)) throw ConfigError("pinching tolerance must be positive");
  policy.t_end = std::max(policy.t_start, 1.0 - eps);
  const ContinuityPath path = run_continuity_path(base, policy);
  if (!path.complete) {
    throw SolverError("continuity path stopped at t = " + std::to_string(path.failed_at) +
                          ": " + path.failure,
                      {});
  }
  const MetricState start = deform(base, path.records.back().phi);
  stepper.s_end = 2.0;
  const FlowTrajectory traj = run_flow(start, stepper);
  if (!traj.complete) throw SolverError("pinching flow failed: " + traj.failure, {});

  PinchResult out;
  out.t_reached = path.records.back().t;
  out.potential = start.potential() + traj.records.back().v;
  const MetricState fin = metric_state(out.potential, base.m());
  const double m = base.m();
  out.achieved = (fin.scalar_curvature().array() - 2.0 * m * (m + 1.0)).abs().maxCoeff();
  out.calabi = calabi_functional(fin);
  out.calabi_bound = 2.0 * (2.0 * m) * (2.0 * m) * (m + 1.0) * eps + (2.0 * m) * (2.0 * m) * eps * eps;
  for (const auto& r : traj.records) out.flow_max_h = std::max(out.flow_max_h, r.sup_h);
  return out;
}

}  // namespace sasaki
