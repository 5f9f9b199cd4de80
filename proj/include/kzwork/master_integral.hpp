#pragma once

#include "kzwork/protocol.hpp"

namespace kzwork {

// Leading large-tau_q behaviour of the integral.
enum class ScalingTag {
  tau_pow_2m,      // k > -1: tau^{-2m}
  tau_pow_2m_log,  // k = -1: tau^{-2m} ln tau
  tau_pow_n1,      // k < -1: tau^{-(n+1)}
};

struct MasterIntegral {
  double value = 0.0;
  ScalingTag tag = ScalingTag::tau_pow_2m;
  double exponent = 0.0;  // -2m or -(n+1)
  bool log_correction = false;
  bool closed_form = true;  // false when the quadrature fallback was used
  bool regulated = true;    // e^{-alpha q} applied (always, except the k < -1 closed form)
};

// int_0^inf dq (v q)^n [p0 sinc^2(J q tau)]^m, v = v(delta_f). For k = n - 2m >= -1 the
// factor e^{-alpha q} is included exactly; for k < -1 the integral converges
// without it and is evaluated unregulated. Orders with m > 6 use quadrature.
MasterIntegral master_integral(int n, int m, const QuenchProtocol& p, double alpha);

// Plain quadrature of the same integral (regulated when alpha > 0).
double master_integral_quadrature(int n, int m, const QuenchProtocol& p, double alpha);

// int_0^inf dtheta theta^l sin^{2m}(theta) e^{-a theta}; a = 0 allowed when l < -1.
double sine_power_integral(int l, int m, double a);

}  // namespace kzwork
