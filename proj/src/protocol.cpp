#include "kzwork/protocol.hpp"

#include <cmath>

#include "kzwork/errors.hpp"

namespace kzwork {

bool QuenchProtocol::is_ground() const { return std::isinf(beta) && beta > 0; }

double QuenchProtocol::delta_at(double t) const {
  if (tau_q == 0.0) return t > 0.0 ? delta_f : 0.0;
  return delta_f * t / tau_q;
}

void QuenchProtocol::validate() const {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("J must be positive and finite");
  if (!(std::abs(delta_f) < 1.0)) throw DomainError("|delta_f| must be < 1 (gapless regime)");
  if (!(tau_q >= 0.0) || !std::isfinite(tau_q)) throw DomainError("tau_q must be finite and >= 0");
  if (std::isnan(beta) || beta < 0.0) throw DomainError("beta must be >= 0 or +inf");
}

QuenchProtocol QuenchProtocol::ground(double J, double delta_f, double tau_q) {
  QuenchProtocol p{J, delta_f, tau_q, std::numeric_limits<double>::infinity()};
  p.validate();
  return p;
}

QuenchProtocol QuenchProtocol::thermal(double J, double delta_f, double tau_q, double beta) {
  QuenchProtocol p{J, delta_f, tau_q, beta};
  p.validate();
  return p;
}

}  // namespace kzwork
