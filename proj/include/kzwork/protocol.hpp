#pragma once

#include <limits>

namespace kzwork {

// Linear ramp Delta(t) = delta_f * t / tau_q on [0, tau_q], starting from the XX point.
// beta = +inf encodes a ground-state quench.
struct QuenchProtocol {
  double J = 1.0;
  double delta_f = 0.0;
  double tau_q = 0.0;
  double beta = std::numeric_limits<double>::infinity();

  bool is_ground() const;
  double delta_at(double t) const;
  // Throws DomainError on J <= 0, |delta_f| >= 1, tau_q < 0, beta < 0 or NaN fields.
  void validate() const;

  static QuenchProtocol ground(double J, double delta_f, double tau_q);
  static QuenchProtocol thermal(double J, double delta_f, double tau_q, double beta);
};

}  // namespace kzwork
