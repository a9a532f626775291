#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/chebyshev_spectrum.hpp"
#include "oracles/fd2d.hpp"
#include "sasaki/errors.hpp"
#include "sasaki/metric.hpp"

using namespace sasaki;

namespace {

double p2(double x) { return 0.5 * (3.0 * x * x - 1.0); }

}  // namespace

TEST(Admissibility, Examples) {
  auto g = make_grid(64);
  auto zero = admissibility(BasicPotential::zero(g));
  EXPECT_TRUE(zero.admissible);
  EXPECT_NEAR(zero.margin, 1.0, 1e-14);

  // r = 1 - 2x dips to -1 toward the north pole; on the grid the min is at
  // the last node.
  auto steep = admissibility(BasicPotential::sample(g, [](double x) { return x; }));
  EXPECT_FALSE(steep.admissible);
  EXPECT_NEAR(steep.margin, 1.0 - 2.0 * g->nodes()(g->size() - 1), 1e-10);
  EXPECT_NEAR(steep.margin, -1.0, 1e-2);

  auto mild = admissibility(BasicPotential::sample(g, [](double x) { return 0.1 * x; }));
  EXPECT_TRUE(mild.admissible);
  EXPECT_NEAR(mild.margin, 0.8, 1e-2);

  const Field nan = Field::Constant(g->size(), std::nan(""));
  EXPECT_FALSE(admissibility(BasicPotential{g, nan}).admissible);
}

TEST(Laplacian, LegendreEigenfunctions) {
  auto g = make_grid(64);
  const Field x = g->nodes();
  EXPECT_LT(basic_laplacian(Field::Constant(64, 3.0), *g).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((basic_laplacian(x, *g) + 8.0 * x).cwiseAbs().maxCoeff(), 1e-10);
  const Field q = x.unaryExpr([](double t) { return p2(t); });
  EXPECT_LT((basic_laplacian(q, *g) + 24.0 * q).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Laplacian, FormulaMatchesDerivativeForm) {
  auto g = make_grid(64);
  const Field x = g->nodes();
  const Field f = (0.7 * x).array().sin() + x.array().exp();
  const Field df = g->d1() * f;
  const Field flux = (1.0 - x.array().square()) * df.array();
  const Field direct = 4.0 * (g->d1() * flux);
  EXPECT_LT((basic_laplacian(f, *g) - direct).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Laplacian, SelfAdjointOnDeformedState) {
  auto g = make_grid(256);
  const auto s = metric_state(
      BasicPotential::sample(g, [](double x) { return 0.1 * x + 0.05 * p2(x); }));
  const Field x = g->nodes();
  const Field f = x.array().cos() + 0.3 * x.array().cube();
  const Field h = (2.0 * x).array().exp() - x.array().square();
  const double a = s.integrate(f.cwiseProduct(s.laplacian(h)));
  const double b = s.integrate(h.cwiseProduct(s.laplacian(f)));
  EXPECT_NEAR(a, b, 1e-10);
}

TEST(MetricState, ReferenceIsEinstein) {
  auto g = make_grid(64);
  const auto s = reference_state(g);
  EXPECT_LT((s.ratio().array() - 1.0).abs().maxCoeff(), 1e-14);
  EXPECT_LT((s.scalar_curvature().array() - 4.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT(s.ricci_potential().cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(s.norm_constant(), 0.0, 1e-14);
}

TEST(MetricState, Invariants) {
  auto g = make_grid(256);
  for (double eps : {0.05, 0.1, 0.2, 0.3}) {
    const auto s = metric_state(BasicPotential::sample(
        g, [eps](double x) { return eps * x + 0.5 * eps * std::sin(2.0 * x); }));
    EXPECT_NEAR(s.integrate(Field::Ones(256)), 1.0, 1e-12);
    EXPECT_NEAR(s.integrate(s.ricci_potential().array().exp().matrix()), 1.0, 1e-12);
    EXPECT_NEAR(s.integrate(s.scalar_curvature()), 4.0, 1e-8);
  }
}

TEST(MetricState, RejectsInadmissible) {
  auto g = make_grid(64);
  try {
    metric_state(BasicPotential::sample(g, [](double x) { return x; }));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_LT(e.margin(), 0.0);
  }
  EXPECT_THROW(metric_state(BasicPotential::zero(g), 2), ConfigError);
}

TEST(MetricState, NormConstantMatchesDirectRootFind) {
  auto g = make_grid(128);
  const auto phi = BasicPotential::sample(g, [](double x) { return 0.02 * std::cos(3 * x); });
  const auto s = metric_state(phi);
  // Bisection on c for \int e^{-log r - 2 phi + c} r = 1.
  auto residual = [&](double c) {
    const Field e = (-2.0 * phi.values.array() + c).exp();
    return g->integrate(e) - 1.0;
  };
  double lo = -5.0;
  double hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(s.norm_constant(), 0.5 * (lo + hi), 1e-12);
}

TEST(MetricState, AgreesWithTwoDimensionalOracle) {
  auto g = make_grid(256);
  auto phi_fn = [](double x) { return 0.1 * x + 0.05 * p2(x) + 0.02 * std::sin(2.0 * x); };
  auto f_fn = [](double x) { return std::cos(1.5 * x) + x * x * x; };
  const auto s = metric_state(BasicPotential::sample(g, phi_fn));
  const Field f = BasicPotential::sample(g, f_fn).values;
  const Field lap = s.laplacian(f);
  oracle::SphereChart chart(phi_fn);
  int checked = 0;
  for (int i = 0; i < g->size(); ++i) {
    const double x = g->nodes()(i);
    if (std::abs(x) >= 0.95 || i % 4) continue;
    EXPECT_NEAR(s.ratio()(i), chart.ratio(x), 1e-6) << "x=" << x;
    EXPECT_NEAR(s.scalar_curvature()(i), chart.curvature(x), 1e-6) << "x=" << x;
    EXPECT_NEAR(lap(i), chart.laplacian(f_fn, x), 1e-6) << "x=" << x;
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(Spectrum, ReferenceLegendreSpectrum) {
  auto g = make_grid(256);
  const auto sp = spectrum(reference_state(g), 9);
  ASSERT_EQ(sp.entries.size(), 9u);
  const auto cheb = oracle::legendre_operator_spectrum(48);
  for (int k = 0; k < 9; ++k) {
    const double exact = -4.0 * k * (k + 1.0);
    EXPECT_EQ(sp.entries[k].multiplicity, 1);
    EXPECT_NEAR(sp.entries[k].eigenvalue, exact, 1e-8 * std::max(1.0, std::abs(exact)));
    EXPECT_NEAR(cheb[k], exact, 1e-8 * std::max(1.0, std::abs(exact)));
  }
  EXPECT_TRUE(sp.obstruction);
  EXPECT_LT(sp.obstruction_gap, 1e-8);
}

TEST(Spectrum, DeformedStateAndResolution) {
  auto g = make_grid(64);
  const auto s = metric_state(BasicPotential::sample(g, [](double x) { return 0.05 * p2(x); }));
  const auto sp = spectrum(s, 4);
  EXPECT_NEAR(sp.entries[0].eigenvalue, 0.0, 1e-10);
  EXPECT_FALSE(sp.obstruction);
  EXPECT_THROW(spectrum(s, 17), ResolutionError);
  EXPECT_THROW(spectrum(s, 0), ConfigError);
}

TEST(Integrate, Examples) {
  auto g = make_grid(64);
  const Field x = g->nodes();
  const auto ref = reference_state(g);
  EXPECT_NEAR(integrate(x, ref), 0.0, 1e-15);
  EXPECT_NEAR(integrate(Field(x.array().square()), *g), 1.0 / 3.0, 1e-12);
  auto other = make_grid(32);
  EXPECT_THROW(integrate(Field::Ones(32), ref), GridMismatch);
  EXPECT_THROW(BasicPotential::zero(g) + BasicPotential::zero(other), GridMismatch);
}

TEST(Distance, QuotientGeodesic) {
  EXPECT_NEAR(quotient_distance(-1.0, 1.0), M_PI / 2.0, 1e-15);
  EXPECT_NEAR(quotient_distance(0.3, 0.3), 0.0, 0.0);
}
