#pragma once

#include <cstdint>
#include <random>

#include "sasaki/metric.hpp"

namespace sasaki {

/// Seeded random admissible potentials: truncated Legendre series with
/// coefficients decaying like 1/(k(k+1)), rejected until the volume ratio
/// stays at least min_margin. The sequence depends only on the seed.
class PotentialSampler {
 public:
  PotentialSampler(GridPtr grid, std::uint64_t seed, int degree = 6,
                   double amplitude = 0.6, double min_margin = 0.1);

  /// Uniform on [0, 1) from the top 53 bits of the engine.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Next admissible potential. The Legendre series has zero mean; a constant
  /// offset is not added. Throws SolverError if rejection does not terminate.
  BasicPotential next();

  /// A potential whose ratio over base stays at least min_margin.
  BasicPotential next_over(const MetricState& base);

 private:
  BasicPotential draw(double scale);

  GridPtr grid_;
  std::mt19937_64 engine_;
  int degree_;
  double amplitude_;
  double min_margin_;
};

}  // namespace sasaki
