#include "sasaki/model.hpp"

#include <string>

#include "sasaki/errors.hpp"

namespace sasaki {

ModelStructure make_round_model(int n, int m) {
  if (m < 1) throw ConfigError("transverse dimension must be positive");
  return ModelStructure{m, 1.0, make_grid(n)};
}

ModelStructure tanno_deform(const ModelStructure& structure, double s) {
  if (!(s > 0.0)) {
    throw DomainError("D-homothetic scale must be positive, got " +
                          std::to_string(s),
                      s);
  }
  ModelStructure out = structure;
  out.tanno_scale *= s;
  return out;
}

double tanno_einstein_constant(double mu, double s) {
  if (!(s > 0.0)) throw DomainError("D-homothetic scale must be positive", s);
  return mu / s;
}

double tanno_scale_to_einstein(double mu, int m) {
  if (!(mu > 0.0)) {
    throw DomainError("transverse Einstein constant must be positive", mu);
  }
  return mu / (2.0 * (m + 1.0));
}

}  // namespace sasaki
