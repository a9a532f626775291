#pragma once

#include <string>
#include <vector>

#include "sasaki/continuity.hpp"
#include "sasaki/curvature.hpp"

namespace sasaki {

/// dv/ds = log(r_{base+v} / r_base) + (m+1) v - h_base.
Field flow_rhs(const BasicPotential& v, const MetricState& base);

struct FlowStepper {
  double ds = 1e-3;
  double s_end = 5.0;
  int record_every = 10;  // steps between stored records; the last step is always stored
  double ds_min = 1e-6;   // halving floor when a step leaves the admissible cone
};

struct FlowRecord {
  double s = 0.0;
  BasicPotential v;
  Field h;            // Ricci potential of base + v, recomputed from scratch
  double sup_vdot = 0.0;
  double sup_h = 0.0;
  double sup_dh2 = 0.0;  // sup (h^2 + (s/2)|dh|^2)
  double c_s = 0.0;      // vdot + h, constant in x
  double bound_a_slack = 0.0;
  double bound_b_slack = 0.0;
  double bound_c_min = 0.0;  // min_x e^{-(m+1)s} Delta_s h_s - min_x Delta_0 h_0
  double bound_d_slack = 0.0;
  double S_pinch = 0.0;      // max |S - 2m(m+1)|
  double holder_h = 0.0;     // discrete [h_s]_{1/2}
};

struct FlowTrajectory {
  std::vector<FlowRecord> records;
  double h0_norm = 0.0;
  double min_laplacian_h0 = 0.0;
  bool complete = false;
  std::string failure;
  FlowStepper stepper;
};

/// Semi-implicit stepping: (R - ds L/4) delta = ds R rhs, the Laplacian part of
/// log r implicit and the (m+1) v term explicit.
FlowTrajectory run_flow(const MetricState& base, const FlowStepper& stepper = {});

struct SmoothingReport {
  double min_a_slack = 0.0;
  double min_b_slack = 0.0;
  double min_c = 0.0;
  double min_d_slack = 0.0;
  bool a_holds = false;
  bool b_holds = false;
  bool c_holds = false;
  bool d_holds = false;
  double max_holder_h = 0.0;
  double fitted_holder_constant = 0.0;  // max [h_s]_{1/2} / ||h_0||
  double evolution_residual = 0.0;      // relative error of the vdot evolution equation
  double v1_norm = 0.0;                 // ||v|| at s = 1
  double v1_bound = 0.0;                // e^{m+1} ||h_0|| / (m+1)
  bool sandwich_held = false;           // r_ref / 2 <= r_{s=1} <= r_ref
  bool all_hold() const { return a_holds && b_holds && c_holds && d_holds; }
};

/// Checks the four smoothing bounds at every record with relative
/// tolerance rel_tol, plus fitted Holder constants.
SmoothingReport smoothing_monitors(const FlowTrajectory& traj, const MetricState& base,
                                   double rel_tol = 1e-6);

/// Discrete [f]_{1/2}: max over node pairs of |f(x) - f(y)| / d(x, y)^{1/2}.
double holder_half(const Field& f, const Grid& grid);

struct PinchResult {
  double t_reached = 0.0;
  double achieved = 0.0;  // max |S - 2m(m+1)|
  double calabi = 0.0;
  double calabi_bound = 0.0;  // 2(2m)^2(m+1) eps + (2m)^2 eps^2
  double flow_max_h = 0.0;
  BasicPotential potential;   // absolute potential of the final structure
};

/// Continuity path to t = max(t_start, 1 - eps), then flow for s in [0, 2].
/// Throws SolverError when the path stops short of its target.
PinchResult epsilon_pinching(const MetricState& base, double eps, PathPolicy policy = {},
                             FlowStepper stepper = {});

}  // namespace sasaki
