#pragma once

#include <functional>
#include <vector>

#include "sasaki/grid.hpp"

namespace sasaki {

/// A Reeb-invariant axisymmetric potential sampled on the grid.
struct BasicPotential {
  GridPtr grid;
  Field values;

  static BasicPotential zero(GridPtr grid);
  static BasicPotential constant(GridPtr grid, double c);
  static BasicPotential sample(GridPtr grid,
                               const std::function<double(double)>& f);

  BasicPotential operator+(const BasicPotential& other) const;
  BasicPotential operator-(const BasicPotential& other) const;
  BasicPotential operator-() const;
  BasicPotential operator*(double s) const;
  BasicPotential operator+(double c) const;

  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }
  double oscillation() const { return values.maxCoeff() - values.minCoeff(); }
};

inline BasicPotential operator*(double s, const BasicPotential& p) {
  return p * s;
}

/// Reference basic Laplacian 4 d/dx[(1 - x^2) f'] of the round quotient.
Field basic_laplacian(const Field& f, const Grid& grid);

/// Volume ratio (d eta_phi)^m ^ eta / (d eta)^m ^ eta = 1 + Delta_B phi / 4
/// of an absolute potential (m = 1).
Field volume_ratio(const BasicPotential& phi);

struct Admissibility {
  bool admissible = false;
  double margin = 0.0;  // minimum of the volume-ratio field
};

/// Membership in the space of admissible potentials.
Admissibility admissibility(const BasicPotential& phi);

/// Transverse data of the structure d eta_phi, phi measured from the round
/// reference. Always admissible; construction throws DomainError otherwise.
class MetricState {
 public:
  int m() const { return m_; }
  const GridPtr& grid() const { return potential_.grid; }
  /// Absolute potential relative to the round reference.
  const BasicPotential& potential() const { return potential_; }
  const Field& ratio() const { return ratio_; }
  const Field& log_ratio() const { return log_ratio_; }
  const Field& scalar_curvature() const { return scalar_; }
  /// Normalized Ricci potential, \int e^h d mu_phi = 1.
  const Field& ricci_potential() const { return ricci_; }
  double norm_constant() const { return norm_constant_; }
  /// Delta_B phi with respect to the reference structure.
  const Field& laplacian_ref() const { return laplacian_ref_; }
  double margin() const { return ratio_.minCoeff(); }

  /// Delta_phi f = Delta_B f / r.
  Field laplacian(const Field& f) const;
  /// |df|^2 in the transverse metric g_phi = r g_ref.
  Field gradient_norm2(const Field& f) const;
  /// \int f d mu_phi with d mu_phi = r d mu_ref.
  double integrate(const Field& f) const;

  friend MetricState metric_state(const BasicPotential& phi, int m);

 private:
  MetricState() = default;

  int m_ = 1;
  BasicPotential potential_;
  Field ratio_;
  Field log_ratio_;
  Field scalar_;
  Field ricci_;
  Field laplacian_ref_;
  double norm_constant_ = 0.0;
};

/// Derived transverse data of an absolute potential. Only m = 1 is solved;
/// other m throw ConfigError. Non-admissible phi throws DomainError.
MetricState metric_state(const BasicPotential& phi, int m = 1);

/// The round Sasakian-Einstein reference (phi = 0).
MetricState reference_state(const GridPtr& grid);

/// The structure d eta_{base + phi}, phi a potential relative to base.
MetricState deform(const MetricState& base, const BasicPotential& phi);

Field basic_laplacian(const Field& f, const MetricState& state);

double integrate(const Field& f, const MetricState& state);
double integrate(const Field& f, const Grid& grid);

/// log \int e^f d mu_ref, evaluated with the max shifted out.
double log_integral_exp(const Field& f, const Grid& grid);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  int multiplicity = 1;  // within the axisymmetric sector
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // descending, starting at 0
  /// True when -4(m + 1) lies in the computed spectrum: a nontrivial
  /// Hamiltonian holomorphic field exists.
  bool obstruction = false;
  double obstruction_gap = 0.0;  // distance from -4(m+1) to nearest eigenvalue
};

/// Lowest k eigenvalues of Delta_phi on the axisymmetric sector.
/// Throws ResolutionError when k > n / 4.
Spectrum spectrum(const MetricState& state, int k, double tol = 1e-6);

/// Geodesic distance between latitudes x and y on the curvature-4 quotient.
double quotient_distance(double x, double y);

}  // namespace sasaki
