#pragma once

#include "sasaki/grid.hpp"

namespace sasaki {

/// The ambient regular model S^3 -> CP^1 at the level of constants.
///
/// At tanno_scale 1 the reference transverse metric is the round
/// curvature-4 quotient, which is Sasakian-Einstein with zero potential.
struct ModelStructure {
  int m = 1;
  double tanno_scale = 1.0;
  GridPtr grid;

  /// The constant m + 1 in rho^T = (m + 1) d eta.
  double einstein_target() const { return m + 1.0; }
  /// Average transverse scalar curvature 2m(m + 1) of the class.
  double mean_scalar_curvature() const { return 2.0 * m * (m + 1.0); }
};

/// Round model with transverse dimension m on an n-point grid.
ModelStructure make_round_model(int n, int m = 1);

/// D-homothetic deformation: multiplies the Tanno scale by s. The transverse
/// metric scales by s and the transverse Ricci form is unchanged.
/// Throws DomainError for s <= 0.
ModelStructure tanno_deform(const ModelStructure& structure, double s);

/// Transverse Einstein constant after a D-homothetic deformation by s:
/// Ric^T = mu g^T becomes Ric^T = (mu / s) g^T.
double tanno_einstein_constant(double mu, double s);

/// The scale s = mu / (2(m + 1)) sending a transverse-Einstein structure with
/// constant mu to the Sasakian-Einstein constant 2(m + 1).
double tanno_scale_to_einstein(double mu, int m);

}  // namespace sasaki
