#include "dopt/model.hpp"

#include <sstream>

namespace dopt {

void ModelParams::validate() const {
  const bool finite = std::isfinite(A) && std::isfinite(beta_cost) && std::isfinite(a) &&
                      std::isfinite(k) && std::isfinite(q);
  if (!finite || !(A > 0.0) || !(beta_cost > 0.0) || !(a >= 0.0 && a < 1.0) || !(k > 0.0) ||
      !(q >= 0.0)) {
    std::ostringstream msg;
    msg << "ModelParams: need A > 0, beta > 0, 0 <= a < 1, k > 0, q >= 0 (got A=" << A
        << ", beta=" << beta_cost << ", a=" << a << ", k=" << k << ", q=" << q << ")";
    throw ConfigError(msg.str());
  }
}

double cost_c(const ModelParams& p, double s, double z) {
  if (s == 0.0) return 0.0;
  if (s < 0.0 || z < 0.0) throw DomainError("cost_c: negative action or type");
  if (z < kEffectiveZero) {
    std::ostringstream msg;
    msg << "cost_c: positive action " << s << " at type " << z << " below effective zero";
    throw DomainError(msg.str());
  }
  return p.beta_cost * s * s / z;
}

}  // namespace dopt
