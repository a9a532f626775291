#include "sasaki/random_potential.hpp"

#include "sasaki/errors.hpp"

namespace sasaki {

PotentialSampler::PotentialSampler(GridPtr grid, std::uint64_t seed, int degree,
                                   double amplitude, double min_margin)
    : grid_(std::move(grid)),
      engine_(seed),
      degree_(degree),
      amplitude_(amplitude),
      min_margin_(min_margin) {
  if (degree_ < 1 || degree_ >= grid_->size()) {
    throw ConfigError("random potential degree out of range");
  }
}

double PotentialSampler::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

BasicPotential PotentialSampler::draw(double scale) {
  Field v = Field::Zero(grid_->size());
  for (int k = 1; k <= degree_; ++k) {
    const double a = scale * amplitude_ * uniform(-1.0, 1.0) / (k * (k + 1.0));
    v += a * grid_->legendre().col(k);
  }
  return {grid_, std::move(v)};
}

BasicPotential PotentialSampler::next() {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    BasicPotential p = draw(1.0);
    if (admissibility(p).margin >= min_margin_) return p;
  }
  throw SolverError("random potential rejection did not terminate", {});
}

BasicPotential PotentialSampler::next_over(const MetricState& base) {
  require_same_grid(grid_, base.grid());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    BasicPotential p = draw(1.0);
    if (admissibility(base.potential() + p).margin >= min_margin_) return p;
  }
  throw SolverError("random potential rejection did not terminate", {});
}

}  // namespace sasaki
