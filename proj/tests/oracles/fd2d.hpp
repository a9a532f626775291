#pragma once

// Brute-force transverse geometry on the sphere in a stereographic chart.
//
// The chart is z = X + iY with u = |z|^2 = (1 + x) / (1 - x). For x > 0 the
// opposite chart z -> 1/z is used (x -> -x), so the stencil always sits where
// the conformal factor is at least 1/4. The reference
// Kahler potential is log(1 + u), whose metric |dz|^2 / (1 + u)^2 is the round
// sphere of curvature 4. A deformed potential adds phi(x(X, Y)). Everything is
// computed with sixth-order central differences in X and Y, no use of the
// one-dimensional reduction.

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

class SphereChart {
 public:
  using Fn = std::function<double(double)>;

  explicit SphereChart(Fn phi, double h = 0.02)
      : phi_(std::move(phi)),
        flipped_([p = phi_](double x) { return p(-x); }),
        h_(h) {}

  static double moment(double X, double Y) {
    const double u = X * X + Y * Y;
    return (u - 1.0) / (u + 1.0);
  }
  static double chart_point(double x) { return std::sqrt((1.0 + x) / (1.0 - x)); }

  /// Volume ratio at moment coordinate x.
  double ratio(double x) const {
    return x > 0.0 ? SphereChart(flipped_, h_).ratio_south(-x) : ratio_south(x);
  }

  /// Gauss curvature of the deformed metric.
  double curvature(double x) const {
    return x > 0.0 ? SphereChart(flipped_, h_).curvature_south(-x)
                   : curvature_south(x);
  }

  /// Laplace-Beltrami of the deformed metric applied to f(x).
  double laplacian(const Fn& f, double x) const {
    if (x > 0.0) {
      return SphereChart(flipped_, h_)
          .laplacian_south([&f](double y) { return f(-y); }, -x);
    }
    return laplacian_south(f, x);
  }

 private:
  double kahler_potential(double X, double Y) const {
    return std::log1p(X * X + Y * Y) + phi_(moment(X, Y));
  }

  double ratio_south(double x) const {
    const double X = chart_point(x);
    const double u = X * X;
    return flat_laplacian([this](double a, double b) { return kahler_potential(a, b); },
                          X, 0.0) *
           (1.0 + u) * (1.0 + u) / 4.0;
  }

  // Gauss curvature of e^{2w} |dz|^2 with e^{2w} = Lap Phi / 4.
  double curvature_south(double x) const {
    const double X = chart_point(x);
    auto w = [this](double a, double b) {
      return 0.5 * std::log(flat_laplacian(
                           [this](double p, double q) { return kahler_potential(p, q); },
                           a, b) /
                       4.0);
    };
    const double e2w = std::exp(2.0 * w(X, 0.0));
    return -flat_laplacian(w, X, 0.0) / e2w;
  }

  double laplacian_south(const Fn& f, double x) const {
    const double X = chart_point(x);
    const double lap_phi = flat_laplacian(
        [this](double a, double b) { return kahler_potential(a, b); }, X, 0.0);
    const double lap_f = flat_laplacian(
        [&f](double a, double b) { return f(moment(a, b)); }, X, 0.0);
    return lap_f / (lap_phi / 4.0);
  }

  template <class G>
  double flat_laplacian(const G& g, double X, double Y) const {
    static constexpr std::array<double, 7> c = {
        1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0,
        3.0 / 2.0,  -3.0 / 20.0, 1.0 / 90.0};
    double sx = 0.0;
    double sy = 0.0;
    for (int k = -3; k <= 3; ++k) {
      sx += c[k + 3] * g(X + k * h_, Y);
      sy += c[k + 3] * g(X, Y + k * h_);
    }
    return (sx + sy) / (h_ * h_);
  }

  Fn phi_;
  Fn flipped_;
  double h_;
};

}  // namespace oracle
