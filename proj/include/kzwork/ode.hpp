#pragma once

// Dormand-Prince 5(4) with PI step-size control for small complex systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "kzwork/errors.hpp"

namespace kzwork {

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  double initial_step = 0.0;  // 0 picks a step from the initial derivative
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
using CState = std::array<std::complex<double>, N>;

template <std::size_t N>
double scaled_error(const CState<N>& err, const CState<N>& y0, const CState<N>& y1, const OdeOptions& o) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / sc;
    s += e * e;
  }
  return std::sqrt(s / N);
}

}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1 in place. `observe(t, y)` runs after every
// accepted step and may throw to abort.
template <std::size_t N, class Rhs, class Observer>
OdeStats integrate_dopri5(Rhs&& f, double t0, double t1, std::array<std::complex<double>, N>& y,
                          const OdeOptions& opt, Observer&& observe) {
  using S = std::array<std::complex<double>, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeStats stats;
  const double span = t1 - t0;
  if (span <= 0.0) return stats;

  auto comb = [](const S& base, double h, std::initializer_list<std::pair<double, const S*>> terms) {
    S out = base;
    for (auto [c, k] : terms) {
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) out[i] += (h * c) * (*k)[i];
    }
    return out;
  };

  S k1 = f(t0, y), k2, k3, k4, k5, k6, k7;
  double h = opt.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sc * sc);
      d1 += std::norm(k1[i]) / (sc * sc);
    }
    h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 * span : 0.01 * std::sqrt(d0 / d1);
  }
  h = std::min(h, span);

  double t = t0;
  double err_prev = 1e-4;
  bool last_rejected = false;
  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw StepBudgetExceeded("ODE step budget exhausted");
    }
    if (t + h > t1 || t1 - (t + h) < 1e-14 * std::abs(t1)) h = t1 - t;

    k2 = f(t + c2 * h, comb(y, h, {{a21, &k1}}));
    k3 = f(t + c3 * h, comb(y, h, {{a31, &k1}, {a32, &k2}}));
    k4 = f(t + c4 * h, comb(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    k5 = f(t + c5 * h, comb(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    k6 = f(t + h, comb(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    S ynew = comb(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    k7 = f(t + h, ynew);
    S err{};
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double e = detail::scaled_error<N>(err, y, ynew, opt);

    if (e <= 1.0) {
      t = (h == t1 - t) ? t1 : t + h;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      observe(t, y);
      // PI controller (Gustafsson), exponents 0.7/5 and 0.4/5
      double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.14) * std::pow(err_prev, 0.08);
      fac = std::clamp(fac, 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_prev = std::max(e, 1e-4);
      h *= fac;
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
      last_rejected = true;
      if (h < 1e-15 * span) throw StepBudgetExceeded("ODE step size underflow");
    }
  }
  return stats;
}

}  // namespace kzwork
