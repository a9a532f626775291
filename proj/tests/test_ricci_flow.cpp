#include <cmath>

#include <gtest/gtest.h>

#include "sasaki/errors.hpp"
#include "sasaki/ricci_flow.hpp"

using namespace sasaki;

namespace {

BasicPotential bump_psi(const GridPtr& g) {
  return BasicPotential::sample(g, [](double x) { return 0.3 * (1.0 - x * x); });
}

double shape_distance(const Field& a, const Field& b) {
  const Field d = a - b;
  return d.maxCoeff() - d.minCoeff();
}

}  // namespace

TEST(FlowRhs, Examples) {
  auto g = make_grid(64);
  const auto ref = reference_state(g);
  EXPECT_LT(flow_rhs(BasicPotential::zero(g), ref).cwiseAbs().maxCoeff(), 1e-15);
  const auto mob = metric_state(mobius_potential(g, 2.0));
  EXPECT_LT(flow_rhs(BasicPotential::zero(g), mob).cwiseAbs().maxCoeff(), 1e-8);
  const auto base = metric_state(bump_psi(g));
  EXPECT_EQ(flow_rhs(BasicPotential::zero(g), base), Field(-base.ricci_potential()));
}

TEST(Flow, EinsteinDataStationary) {
  auto g = make_grid(64);
  FlowStepper st;
  st.s_end = 5.0;
  st.record_every = 100;
  const auto traj = run_flow(reference_state(g), st);
  ASSERT_TRUE(traj.complete);
  for (const auto& r : traj.records) EXPECT_LT(r.v.sup_norm(), 1e-10) << r.s;
}

TEST(Flow, MonitorsOnBumpTrajectory) {
  auto g = make_grid(96);
  const auto base = metric_state(bump_psi(g));
  FlowStepper st;
  st.s_end = 2.0;
  st.record_every = 20;
  const auto traj = run_flow(base, st);
  ASSERT_TRUE(traj.complete) << traj.failure;
  EXPECT_EQ(traj.records.front().s, 0.0);
  EXPECT_EQ(traj.records.back().s, 2.0);
  EXPECT_NEAR(traj.records.front().bound_c_min, 0.0, 1e-12);
  EXPECT_NEAR(traj.records.front().c_s, 0.0, 1e-12);
  const auto rep = smoothing_monitors(traj, base);
  EXPECT_TRUE(rep.a_holds) << rep.min_a_slack;
  EXPECT_TRUE(rep.b_holds) << rep.min_b_slack;
  EXPECT_TRUE(rep.c_holds) << rep.min_c;
  EXPECT_TRUE(rep.d_holds) << rep.min_d_slack;
  EXPECT_LT(rep.evolution_residual, 1e-4);
  EXPECT_LE(rep.v1_norm, rep.v1_bound);
  // h tends to zero in the tail.
  for (std::size_t k = traj.records.size() / 2; k + 1 < traj.records.size(); ++k) {
    EXPECT_LE(traj.records[k + 1].sup_h, traj.records[k].sup_h);
  }
}

TEST(Flow, AgreesWithContinuityEndpoint) {
  auto g = make_grid(96);
  const auto base = metric_state(bump_psi(g));
  FlowStepper st;
  st.s_end = 5.0;
  st.record_every = 1000;
  const auto traj = run_flow(base, st);
  ASSERT_TRUE(traj.complete);
  EXPECT_LT(shape_distance(traj.records.back().v.values, -bump_psi(g).values), 1e-5);
  EXPECT_LT(traj.records.back().S_pinch, 1e-5);
}

TEST(Flow, StepHalvingConverges) {
  auto g = make_grid(48);
  const auto base = metric_state(bump_psi(g));
  FlowStepper a;
  a.s_end = 0.5;
  a.ds = 2e-3;
  a.record_every = 1000;
  FlowStepper b = a;
  b.ds = 1e-3;
  const Field va = run_flow(base, a).records.back().v.values;
  const Field vb = run_flow(base, b).records.back().v.values;
  EXPECT_LT(shape_distance(va, vb), 1e-3);
}

TEST(Flow, RejectsBadStepper) {
  auto g = make_grid(32);
  FlowStepper st;
  st.ds = 0.0;
  EXPECT_THROW(run_flow(reference_state(g), st), ConfigError);
}

TEST(Pinching, RoundIsAlreadyPinched) {
  auto g = make_grid(64);
  const auto r = epsilon_pinching(reference_state(g), 0.1);
  EXPECT_LT(r.achieved, 1e-8);
  EXPECT_LT(r.calabi, 1e-14);
}

TEST(Pinching, BumpBase) {
  auto g = make_grid(96);
  const auto base = metric_state(bump_psi(g));
  PathPolicy pol;
  pol.with_K = false;
  const auto r = epsilon_pinching(base, 0.05, pol);
  EXPECT_GE(r.t_reached, 0.95 - 1e-12);
  EXPECT_LT(r.achieved, 0.05);
  EXPECT_LT(r.calabi, r.calabi_bound);
  EXPECT_NEAR(r.calabi_bound, 16.0 * 0.05 + 4.0 * 0.0025, 1e-14);
}

TEST(Holder, HalfSeminorm) {
  auto g = make_grid(32);
  EXPECT_EQ(holder_half(Field::Constant(32, 2.0), *g), 0.0);
  EXPECT_GT(holder_half(g->nodes(), *g), 0.0);
}
