#pragma once

#include <cstdint>
#include <limits>

#include "sasaki/metric.hpp"

namespace sasaki {

/// Contractions of a transverse curvature tensor at one point.
///
/// Norms use the Hermitian pairing |T|^2 = T_{a b' c d'} conj(T_{p q' r s'})
/// g^{a p'} g^{q b'} g^{r s'}..., i.e. the sum of |T|^2 over a unitary frame.
/// With this convention S = g^{b'a} Ric_{ab'}, |rho|^2 = |Ric|^2 and at
/// constant curvature |rho|^2 = S^2 / m.
struct RoundCurvatureModel {
  int m = 0;
  double c = 0.0;
  double S = 0.0;
  double Rm2 = 0.0;
  double rho2 = 0.0;
  double Q2 = 0.0;
  double pinching_integrand = 0.0;  // only meaningful for m >= 2, else 0
  double identity_residual = 0.0;  // |Q2 - (Rm2 - 2 S^2 / (m(m+1)))| / max(1, Rm2)
};

/// Builds R_{ab'cd'} = (c/2)(g_{ab'} g_{cd'} + g_{ad'} g_{cb'}) on a random
/// Hermitian positive frame and contracts with plain index loops. A nonzero
/// perturbation adds a random tensor with the Kahler symmetries, which makes
/// Q nonzero. Throws ConfigError for m < 1 or c <= 0.
RoundCurvatureModel round_tensor_contractions(int m, double c, double perturbation = 0.0,
                                              std::uint64_t seed = 1);

/// |Rm|^2 - 2S^2/(m(m+1)) - ((m-1)(m+2)/(m(m+1)))(S^2 - (2m(m+1))^2) at
/// constant curvature c. Throws ConfigError for m < 2.
double round_pinching_integrand(int m, double c = 4.0);

/// Pointwise |Q|^2 at m = 1: K^2 - S^2 with K the Gauss curvature of r g_ref
/// from the Brioschi formula, S from the state.
Field q_norm_field(const MetricState& state);

/// \int (S - 2m(m+1))^2 d mu_phi.
double calabi_functional(const MetricState& state);

/// Running extremes of S over the structures seen so far; an estimate of the
/// bounds of the transverse scalar curvature over a class, never the true value.
struct CurvatureEnvelope {
  double min_S = std::numeric_limits<double>::infinity();
  double max_S = -std::numeric_limits<double>::infinity();
  int observed = 0;
  void observe(const MetricState& state);
};

}  // namespace sasaki
