#include "sasaki/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sasaki/errors.hpp"

namespace sasaki {
namespace {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;

class Tensor4 {
 public:
  explicit Tensor4(int m) : m_(m), data_(static_cast<std::size_t>(m * m * m * m)) {}
  cd& operator()(int a, int b, int c, int d) { return data_[idx(a, b, c, d)]; }
  cd operator()(int a, int b, int c, int d) const { return data_[idx(a, b, c, d)]; }

 private:
  std::size_t idx(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * m_ + b) * m_ + c) * m_ + d);
  }
  int m_;
  std::vector<cd> data_;
};

double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

CMat random_complex(int m, std::mt19937_64& eng) {
  CMat a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = cd(2.0 * unit(eng) - 1.0, 2.0 * unit(eng) - 1.0);
  }
  return a;
}

CMat random_hermitian(int m, std::mt19937_64& eng) {
  const CMat a = random_complex(m, eng);
  return 0.5 * (a + a.adjoint());
}

// g_{ab'} g_{cd'} + g_{ad'} g_{cb'}
Tensor4 constant_curvature(const CMat& g) {
  const int m = static_cast<int>(g.rows());
  Tensor4 t(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) t(a, b, c, d) = g(a, b) * g(c, d) + g(a, d) * g(c, b);
  return t;
}

// Pairs each unbarred index with a barred one through the inverse metric.
double norm2(const Tensor4& t, const CMat& gi, int m) {
  cd sum = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
              for (int r = 0; r < m; ++r)
                for (int s = 0; s < m; ++s)
                  sum += t(a, b, c, d) * t(p, q, r, s) * gi(b, p) * gi(q, a) * gi(d, r) *
                         gi(s, c);
  return sum.real();
}

}  // namespace

RoundCurvatureModel round_tensor_contractions(int m, double c, double perturbation,
                                              std::uint64_t seed) {
  if (m < 1) throw ConfigError("m must be at least 1");
  if (!(c > 0.0)) throw ConfigError("curvature constant must be positive");
  std::mt19937_64 eng(seed);
  const CMat p = CMat::Identity(m, m) + 0.3 * random_complex(m, eng);
  const CMat g = p * p.adjoint();
  const CMat gi = g.inverse();

  Tensor4 r = constant_curvature(g);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int cc = 0; cc < m; ++cc)
        for (int d = 0; d < m; ++d) r(a, b, cc, d) *= 0.5 * c;
  if (perturbation != 0.0) {
    const CMat h = random_hermitian(m, eng);
    const CMat k = random_hermitian(m, eng);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int cc = 0; cc < m; ++cc)
          for (int d = 0; d < m; ++d)
            r(a, b, cc, d) += perturbation * (h(a, b) * k(cc, d) + h(cc, b) * k(a, d) +
                                              k(a, b) * h(cc, d) + k(cc, b) * h(a, d));
  }

  CMat ric = CMat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int cc = 0; cc < m; ++cc)
        for (int d = 0; d < m; ++d) ric(a, b) += r(a, b, cc, d) * gi(d, cc);
  cd s = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s += gi(b, a) * ric(a, b);
  cd rho2 = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int p2 = 0; p2 < m; ++p2)
        for (int q = 0; q < m; ++q) rho2 += ric(a, b) * ric(p2, q) * gi(b, p2) * gi(q, a);

  RoundCurvatureModel out;
  out.m = m;
  out.c = c;
  out.S = s.real();
  out.rho2 = rho2.real();
  out.Rm2 = norm2(r, gi, m);

  const double mm1 = m * (m + 1.0);
  const double lambda = out.S / mm1;
  Tensor4 q = constant_curvature(g);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int cc = 0; cc < m; ++cc)
        for (int d = 0; d < m; ++d) q(a, b, cc, d) = r(a, b, cc, d) - lambda * q(a, b, cc, d);
  out.Q2 = norm2(q, gi, m);
  out.identity_residual =
      std::abs(out.Q2 - (out.Rm2 - 2.0 * out.S * out.S / mm1)) / std::max(1.0, out.Rm2);
  if (m >= 2) {
    const double target = 2.0 * mm1;
    out.pinching_integrand = out.Rm2 - 2.0 * out.S * out.S / mm1 -
                            ((m - 1.0) * (m + 2.0) / mm1) * (out.S * out.S - target * target);
  }
  return out;
}

double round_pinching_integrand(int m, double c) {
  if (m < 2) throw ConfigError("the pinching integrand needs m >= 2");
  return round_tensor_contractions(m, c).pinching_integrand;
}

Field q_norm_field(const MetricState& state) {
  if (state.m() != 1) throw ConfigError("q_norm_field is only available at m = 1");
  // Brioschi for r g_ref: K = (4 - 2 d/dx[(1 - x^2)(log r)']) / r, with the
  // derivative taken in Legendre modes, d/dx[(1 - x^2) P_k'] = -k(k+1) P_k.
  const Grid& g = *state.grid();
  Field c = g.analyze(state.log_ratio());
  for (int k = 0; k < c.size(); ++k) c(k) *= -k * (k + 1.0);
  const Field div = g.legendre().leftCols(c.size()) * c;
  const Field gauss = (4.0 - 2.0 * div.array()) / state.ratio().array();
  return (gauss.array().square() - state.scalar_curvature().array().square()).matrix();
}

double calabi_functional(const MetricState& state) {
  const double sbar = 2.0 * state.m() * (state.m() + 1.0);
  return state.integrate((state.scalar_curvature().array() - sbar).square().matrix());
}

void CurvatureEnvelope::observe(const MetricState& state) {
  min_S = std::min(min_S, state.scalar_curvature().minCoeff());
  max_S = std::max(max_S, state.scalar_curvature().maxCoeff());
  ++observed;
}

}  // namespace sasaki
