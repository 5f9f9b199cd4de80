#include "kzwork/master_integral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "kzwork/errors.hpp"
#include "kzwork/luttinger.hpp"
#include "kzwork/quadrature.hpp"

namespace kzwork {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kClosedFormMaxM = 6;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// sin^{2m} x = C/4^m + sum_k w_k cos(c_k x)
struct Expansion {
  double constant;
  std::vector<double> w, c;
};
Expansion expand(int m) {
  Expansion e;
  e.constant = binom(2 * m, m) / std::pow(4.0, m);
  for (int k = 0; k < m; ++k) {
    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    e.w.push_back(2.0 * sign * binom(2 * m, k) / std::pow(4.0, m));
    e.c.push_back(2.0 * (m - k));
  }
  return e;
}

double sinc_pow(double x, int m) {
  const double s = (std::abs(x) < 1e-4) ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
  return std::pow(s, 2 * m);
}

}  // namespace

double sine_power_integral(int l, int m, double a) {
  if (m < 1) throw DomainError("sine_power_integral: m must be >= 1");
  if (l > -1 && !(a > 0.0)) throw DomainError("sine_power_integral: l >= 0 needs a > 0");
  if (l + 2 * m < 0) throw DomainError("sine_power_integral: integrand singular at 0");
  const Expansion e = expand(m);
  if (l >= 0) {
    double s = e.constant / std::pow(a, l + 1);
    for (std::size_t k = 0; k < e.w.size(); ++k) {
      s += e.w[k] * std::real(std::pow(std::complex<double>(a, -e.c[k]), -(l + 1)));
    }
    return factorial(l) * s;
  }
  if (l == -1) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.w.size(); ++k) s += -0.5 * e.w[k] * std::log1p(e.c[k] * e.c[k] / (a * a));
    return s;
  }
  if (a != 0.0) throw DomainError("sine_power_integral: closed form for l < -1 is unregulated (a = 0)");
  const int pw = -l;
  double s = 0.0;
  if (pw % 2 == 0) {
    for (std::size_t k = 0; k < e.w.size(); ++k) s += e.w[k] * std::pow(e.c[k], pw - 1);
    const double sign = ((pw / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * kPi / (2.0 * factorial(pw - 1)) * s;
  }
  for (std::size_t k = 0; k < e.w.size(); ++k) s -= e.w[k] * std::pow(e.c[k], pw - 1) * std::log(e.c[k]);
  const double sign = (((pw - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign / factorial(pw - 1) * s;
}

double master_integral_quadrature(int n, int m, const QuenchProtocol& p, double alpha) {
  p.validate();
  if (n < 0 || m < 1) throw DomainError("master_integral: need n >= 0, m >= 1");
  if (!(p.tau_q > 0.0)) throw DomainError("master_integral: tau_q must be > 0");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double p0 = std::pow(p.delta_f / kPi, 2);
  const double jt = p.J * p.tau_q;
  const double a = alpha / jt;
  const int l = n - 2 * m;
  if (l >= -1 && !(alpha > 0.0)) throw DomainError("master_integral: this order needs alpha > 0");
  // theta-integral of theta^n sinc^{2m}(theta) e^{-a theta}
  auto g = [&](double th) { return std::pow(th, n) * sinc_pow(th, m) * std::exp(-a * th); };
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-12;
  double upper;
  double tail = 0.0;
  if (a > 0.0) {
    upper = std::max(60.0 / a, 20.0 * kPi);
  } else {
    // a = 0 and l < -1: stop at a multiple of pi and add the averaged tail
    upper = 4000.0 * kPi;
    tail = expand(m).constant * std::pow(upper, l + 1) / double(-l - 1);
  }
  const std::size_t panels = std::size_t(std::ceil(upper / kPi)) * 2;
  const double val = integrate(g, 0.0, upper, o, panels).value + tail;
  return std::pow(v, n) * std::pow(p0, m) / std::pow(jt, n + 1) * val;
}

MasterIntegral master_integral(int n, int m, const QuenchProtocol& p, double alpha) {
  p.validate();
  if (n < 0 || m < 1) throw DomainError("master_integral: need n >= 0, m >= 1");
  if (!(p.tau_q > 0.0)) throw DomainError("master_integral: tau_q must be > 0");
  const int l = n - 2 * m;
  MasterIntegral r;
  if (l > -1) {
    r.tag = ScalingTag::tau_pow_2m;
    r.exponent = -2.0 * m;
  } else if (l == -1) {
    r.tag = ScalingTag::tau_pow_2m_log;
    r.exponent = -2.0 * m;
    r.log_correction = true;
  } else {
    r.tag = ScalingTag::tau_pow_n1;
    r.exponent = -(n + 1.0);
    r.regulated = false;
  }
  if (l >= -1 && !(alpha > 0.0)) throw DomainError("master_integral: this order needs alpha > 0");
  if (m > kClosedFormMaxM) {
    r.closed_form = false;
    r.value = master_integral_quadrature(n, m, p, r.regulated ? alpha : 0.0);
    return r;
  }
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double p0 = std::pow(p.delta_f / kPi, 2);
  const double jt = p.J * p.tau_q;
  const double a = r.regulated ? alpha / jt : 0.0;
  r.value = std::pow(v, n) * std::pow(p0, m) / std::pow(jt, n + 1) * sine_power_integral(l, m, a);
  return r;
}

}  // namespace kzwork
