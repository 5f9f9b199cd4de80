#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kzwork {

struct ScalingFit {
  double exponent = 0.0;  // y ~ tau^exponent (times ln tau when log_correction)
  bool log_correction = false;
  double r_squared = 0.0;
  double prefactor = 0.0;  // e^c
  double residual = 0.0;   // sum of squared log residuals of the selected model
  double tau_min = 0.0, tau_max = 0.0;
};

using ScalingPoint = std::pair<double, double>;  // (tau_q, value)

// OLS on (ln tau, ln y). With detect_log, also fits ln y = c + theta ln tau + ln ln tau
// (only when every tau > 1) and keeps the model with the smaller residual sum.
// Needs >= 6 points over >= one decade with positive values; throws DomainError otherwise.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, bool detect_log);

// Upper envelope of an oscillating sequence: the maximum over consecutive windows
// of width `window` in tau (points sorted by tau). Each window contributes its
// argmax point.
std::vector<ScalingPoint> upper_envelope(std::span<const ScalingPoint> points, double window);

}  // namespace kzwork
