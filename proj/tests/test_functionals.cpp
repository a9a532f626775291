#include <cmath>

#include <gtest/gtest.h>

#include "sasaki/errors.hpp"
#include "sasaki/functionals.hpp"
#include "sasaki/random_potential.hpp"

using namespace sasaki;

namespace {

double p2(double x) { return 0.5 * (3.0 * x * x - 1.0); }

BasicPotential linear(const GridPtr& g, double eps) {
  return BasicPotential::sample(g, [eps](double x) { return eps * x; });
}

// I at m = 1 integrates (1 - x^2) phi'^2 against dx/2; evaluated with an
// unrelated 400-point Gauss rule and the analytic derivative.
double dirichlet_energy(const std::function<double(double)>& dphi) {
  const Quadrature q = gauss_legendre_unit(400);
  double s = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = 2.0 * q.nodes(i) - 1.0;
    s += q.weights(i) * (1.0 - x * x) * dphi(x) * dphi(x);
  }
  return s;
}

}  // namespace

TEST(Functionals, ZeroPotential) {
  auto g = make_grid(64);
  const auto ref = reference_state(g);
  const auto zero = BasicPotential::zero(g);
  EXPECT_EQ(eval_I(zero, ref), 0.0);
  EXPECT_EQ(eval_J(zero, ref), 0.0);
  const auto f = eval_F(zero, ref);
  EXPECT_NEAR(f.F0, 0.0, 1e-15);
  EXPECT_NEAR(f.F, 0.0, 1e-15);
  EXPECT_NEAR(eval_K_energy(zero, ref), 0.0, 1e-15);
}

TEST(Functionals, LinearPotentialClosedForms) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto phi = linear(g, 0.1);
  const double I = eval_I(phi, ref);
  EXPECT_NEAR(I, 2.0 * 0.01 / 3.0, 1e-10);
  EXPECT_NEAR(I, dirichlet_energy([](double) { return 0.1; }), 1e-12);
  const double J = eval_J(phi, ref);
  EXPECT_NEAR(J, I / 2.0, 1e-10);
  EXPECT_NEAR(J, 0.01 / 3.0, 1e-9);
  const auto f = eval_F(phi, ref);
  EXPECT_NEAR(f.F0, J, 1e-14);  // \int x d mu_ref = 0
  const double expect_F = 0.01 / 3.0 - 0.5 * std::log(std::sinh(0.2) / 0.2);
  EXPECT_NEAR(f.F, expect_F, 1e-12);
  EXPECT_NEAR(f.F, 4.4332e-6, 1e-9);
}

TEST(Functionals, NonPolynomialIAgainstDirichletEnergy) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto phi = BasicPotential::sample(g, [](double x) { return 0.05 * std::sin(2.0 * x); });
  EXPECT_NEAR(eval_I(phi, ref),
              dirichlet_energy([](double x) { return 0.1 * std::cos(2.0 * x); }), 1e-12);
}

TEST(Functionals, IIndependentOfBaseAtM1) {
  auto g = make_grid(128);
  const auto base = metric_state(BasicPotential::sample(g, [](double x) { return 0.05 * p2(x); }));
  const auto phi = linear(g, 0.1);
  EXPECT_NEAR(eval_I(phi, base), eval_I(phi, reference_state(g)), 1e-12);
}

TEST(Functionals, TranslationInvariance) {
  auto g = make_grid(128);
  const auto ref = reference_state(g);
  PotentialSampler sampler(g, 11);
  for (int i = 0; i < 10; ++i) {
    const auto phi = sampler.next();
    const double c = sampler.uniform(-5.0, 5.0);
    const auto shifted = phi + c;
    EXPECT_NEAR(eval_I(shifted, ref), eval_I(phi, ref), 1e-10);
    EXPECT_NEAR(eval_J(shifted, ref), eval_J(phi, ref), 1e-10);
    EXPECT_NEAR(eval_F(shifted, ref).F, eval_F(phi, ref).F, 1e-10);
    EXPECT_NEAR(eval_F(shifted, ref).F0, eval_F(phi, ref).F0 - c, 1e-10);
  }
}

TEST(Functionals, KEnergyPathIndependence) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto phi = linear(g, 0.1);
  const double k_lin = eval_K_energy(phi, ref, 48, PathShape::linear);
  const double k_quad = eval_K_energy(phi, ref, 48, PathShape::quadratic);
  EXPECT_NEAR(k_lin, k_quad, 1e-8);
  EXPECT_GT(k_lin, 0.0);
}

TEST(Functionals, CocycleExamples) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto phi = linear(g, 0.1);
  const auto same = verify_cocycle(phi, phi, ref);
  EXPECT_LT(std::abs(same.F_cocycle), 1e-15);
  const auto r = verify_cocycle(linear(g, 0.05), phi, ref);
  EXPECT_LT(r.max_abs(), 1e-9);
}

TEST(Functionals, RandomSweep) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  PotentialSampler sampler(g, 2024);
  double worst_cocycle = 0.0;
  double worst_collapse = 0.0;
  double worst_kf = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto psi = sampler.next();
    const auto base = deform(ref, psi);
    const auto phi = sampler.next_over(base) + psi;
    worst_cocycle = std::max(worst_cocycle, verify_cocycle(psi, phi, ref).max_abs());
    const auto sw = verify_ij_sandwich(phi, ref);
    EXPECT_TRUE(sw.holds(1e-10));
    worst_collapse = std::max(worst_collapse, std::abs(sw.J - sw.I / 2.0));
    const auto mf = verify_mabuchi_f_relation(phi - psi, base);
    worst_kf = std::max(worst_kf, std::abs(mf.residual));
    EXPECT_GE(mf.inequality_slack, -1e-12);
  }
  EXPECT_LT(worst_cocycle, 1e-8);
  EXPECT_LT(worst_collapse, 1e-10);
  EXPECT_LT(worst_kf, 1e-8);
}

TEST(Functionals, SandwichCollapsesAtM1) {
  auto g = make_grid(128);
  const auto r = verify_ij_sandwich(linear(g, 0.2), reference_state(g));
  EXPECT_NEAR(r.slack_lower, 0.0, 1e-10);
  EXPECT_NEAR(r.slack_upper, 0.0, 1e-10);
  const auto zero = verify_ij_sandwich(BasicPotential::zero(g), reference_state(g));
  EXPECT_EQ(zero.min_slack(), 0.0);
}

TEST(Functionals, F0DerivativeAlongRay) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto phi = BasicPotential::sample(g, [](double x) { return 0.1 * x + 0.04 * p2(x); });
  const double s = 0.6;
  const double h = 1e-4;
  const double fd = (eval_F(phi * (s + h), ref).F0 - eval_F(phi * (s - h), ref).F0) / (2 * h);
  const double exact = -deform(ref, phi * s).integrate(phi.values);
  EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact));
}

TEST(Functionals, IMinusJDerivative) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto a = linear(g, 0.1);
  const auto b = BasicPotential::sample(g, [](double x) { return 0.05 * p2(x); });
  auto path = [&](double t) { return a * t + b * (t * t); };
  auto ij = [&](double t) {
    const auto p = path(t);
    return eval_I(p, ref) - eval_J(p, ref);
  };
  const double t = 0.7;
  const double h = 1e-4;
  const double fd = (ij(t + h) - ij(t - h)) / (2 * h);
  const auto st = deform(ref, path(t));
  const Field vel = a.values + 2.0 * t * b.values;
  const double exact = -0.25 * st.integrate(path(t).values.cwiseProduct(st.laplacian(vel)));
  EXPECT_NEAR(fd, exact, 1e-5 * std::abs(exact));
}

TEST(Functionals, ShiftBound) {
  auto g = make_grid(128);
  const auto ref = reference_state(g);
  const auto phi = BasicPotential::sample(g, [](double x) { return 0.05 * p2(x); });
  const auto c = verify_shift_bound(phi, BasicPotential::constant(g, 0.7), ref);
  EXPECT_NEAR(c.lhs, 0.0, 1e-12);
  const auto r = verify_shift_bound(phi, linear(g, 0.1), ref);
  EXPECT_TRUE(r.holds());
  EXPECT_GT(r.slack(), 0.0);
  const auto z = verify_shift_bound(BasicPotential::zero(g), BasicPotential::zero(g), ref);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.bound, 0.0);
}

TEST(Functionals, MabuchiRelationAtReference) {
  auto g = make_grid(256);
  const auto ref = reference_state(g);
  const auto r = verify_mabuchi_f_relation(linear(g, 0.1), ref);
  EXPECT_LT(std::abs(r.residual), 1e-8);
  EXPECT_NEAR(r.inequality_slack, -2.0 * r.h_target, 1e-8);
  EXPECT_GE(r.inequality_slack, 0.0);
  const auto z = verify_mabuchi_f_relation(BasicPotential::zero(g), ref);
  EXPECT_LT(std::abs(z.residual), 1e-14);
}

TEST(Functionals, OscBound) {
  auto g = make_grid(128);
  const auto ref = reference_state(g);
  const auto z = osc_bound_report(BasicPotential::zero(g), ref, 1.0);
  EXPECT_EQ(z.osc, 0.0);
  EXPECT_EQ(z.I, 0.0);
  double worst = -1e300;
  // eps x keeps S^T >= 1 up to eps = 0.2; past 0.25 the curvature turns
  // negative near the north pole.
  for (double eps : {0.05, 0.1, 0.15, 0.2}) {
    const auto r = osc_bound_report(linear(g, eps), ref, 1.0);
    EXPECT_NEAR(r.osc, 2.0 * eps * g->nodes()(g->size() - 1), 1e-14);
    worst = std::max(worst, r.excess);
    EXPECT_GE(r.prop_constant, 0.0);
  }
  EXPECT_LT(worst, 1.0);
  EXPECT_THROW(osc_bound_report(linear(g, 0.3), ref, 1.0), DomainError);
}

TEST(Functionals, InadmissibleRejected) {
  auto g = make_grid(64);
  const auto ref = reference_state(g);
  EXPECT_THROW(eval_I(linear(g, 1.0), ref), DomainError);
  EXPECT_THROW(eval_F(linear(g, 1.0), ref), DomainError);
}

TEST(Sampler, DeterministicAndAdmissible) {
  auto g = make_grid(64);
  PotentialSampler a(g, 5);
  PotentialSampler b(g, 5);
  for (int i = 0; i < 20; ++i) {
    const auto p = a.next();
    const auto q = b.next();
    EXPECT_EQ(p.values, q.values);
    EXPECT_GE(admissibility(p).margin, 0.1);
  }
}
