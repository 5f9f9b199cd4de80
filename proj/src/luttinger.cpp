#include "kzwork/luttinger.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kzwork/airy.hpp"
#include "kzwork/errors.hpp"
#include "kzwork/ode.hpp"

namespace kzwork {
namespace {

constexpr double kPi = std::numbers::pi;

void check_delta(double delta) {
  if (!(std::abs(delta) <= 1.0)) throw DomainError("|delta| must be <= 1");
}

}  // namespace

LuttingerParams luttinger_params(double delta, double J) {
  check_delta(delta);
  if (delta == 1.0) return {0.0, 0.5};
  if (delta == -1.0) throw DomainError("delta = -1 is the ferromagnetic point, K diverges");
  const double ac = std::acos(delta);
  return {J * kPi * std::sqrt(1.0 - delta * delta) / (2.0 * ac), (kPi / 2.0) / (kPi - ac)};
}

double dlog_v(double delta) {
  const double s = std::sqrt(1.0 - delta * delta);
  return -delta / (s * s) + 1.0 / (std::acos(delta) * s);
}

double dlog_K(double delta) {
  const double s = std::sqrt(1.0 - delta * delta);
  return -1.0 / (s * (kPi - std::acos(delta)));
}

CouplingFactors coupling_profile(double t, const QuenchProtocol& p) {
  p.validate();
  if (t < 0.0 || t > p.tau_q) throw DomainError("coupling_profile: t outside [0, tau_q]");
  const LuttingerParams lp = luttinger_params(p.delta_at(t), p.J);
  const double vK = lp.v * lp.K / p.J;
  const double v_over_K = lp.v / lp.K / p.J;
  return {(v_over_K + vK) / 2.0, (v_over_K - vK) / 2.0};
}

double squeeze_angle(double delta_f) { return -0.5 * std::log(luttinger_params(delta_f).K); }

Bogoliubov bogoliubov_map(cplx x1, cplx x2, double gamma_tau, double gamma_0) {
  const double c = std::cosh(gamma_tau), s = std::sinh(gamma_tau);
  const double c0 = std::cosh(gamma_0), s0 = std::sinh(gamma_0);
  const cplx r11 = c * x1 - s * x2;
  const cplx r12 = -c * std::conj(x2) + s * std::conj(x1);
  const cplx r21 = s * x1 - c * x2;
  const cplx r22 = -s * std::conj(x2) + c * std::conj(x1);
  return {c0 * r11 - s0 * r12, c0 * r21 - s0 * r22};
}

ModeSolution solve_mode(double q, const QuenchProtocol& p, const ModeSolverOptions& opts) {
  p.validate();
  if (!(q > 0.0)) throw DomainError("solve_mode: q must be > 0");
  if (!(opts.abs_tol > 0.0 && opts.rel_tol > 0.0)) throw DomainError("solve_mode: tolerances must be > 0");

  const bool linear = opts.profile == VelocityProfile::linearized;
  const double J = p.J;
  auto velocity = [&](double delta) {
    return linear ? J * std::sqrt(1.0 + 4.0 * delta / kPi) : luttinger_params(delta, J).v;
  };
  auto vK_at = [&](double delta) {
    if (linear) return J;
    const LuttingerParams lp = luttinger_params(delta, J);
    return lp.v * lp.K;
  };

  ModeSolution sol;
  sol.q = q;
  if (p.tau_q == 0.0) {
    sol.x1 = 1.0;
    sol.x2 = 0.0;
    sol.f_minus = 1.0;
    sol.f_plus = 1.0;
  } else {
    const double rate = p.delta_f / p.tau_q;
    auto rhs = [&](double t, const std::array<cplx, 2>& y) {
      const double d = p.delta_at(t);
      const double dlog_vK = linear ? 0.0 : (dlog_v(d) + dlog_K(d)) * rate;
      const double w = q * velocity(d);
      return std::array<cplx, 2>{y[1], dlog_vK * y[1] - w * w * y[0]};
    };
    // Local error control lets the invariant drift grow with the number of steps; when the
    // final drift misses the contract the integration is repeated at tighter tolerances.
    double tighten = 1.0;
    for (int attempt = 0;; ++attempt) {
      std::array<cplx, 2> y{cplx(1.0), cplx(0.0, -q * vK_at(0.0))};
      double drift = 0.0;
      auto observe = [&](double t, const std::array<cplx, 2>& s) {
        const cplx fp = cplx(0.0, 1.0) * s[1] / (q * vK_at(p.delta_at(t)));
        drift = std::max(drift, std::abs(std::real(fp * std::conj(s[0])) - 1.0));
      };
      OdeOptions o;
      o.abs_tol = std::max(opts.abs_tol * tighten, 1e-16);
      o.rel_tol = std::max(opts.rel_tol * tighten, 1e-14);
      o.max_steps = opts.max_steps;
      const OdeStats st = integrate_dopri5<2>(rhs, 0.0, p.tau_q, y, o, observe);
      sol.steps = st.accepted;
      sol.max_constraint_drift = drift;
      sol.f_minus = y[0];
      sol.f_plus = cplx(0.0, 1.0) * y[1] / (q * vK_at(p.delta_f));
      sol.x1 = (sol.f_plus + sol.f_minus) / 2.0;
      sol.x2 = (sol.f_plus - sol.f_minus) / 2.0;
      const double final_drift = std::abs(std::norm(sol.x1) - std::norm(sol.x2) - 1.0);
      if (final_drift <= 10.0 * opts.rel_tol) break;
      if (attempt == 3 || o.rel_tol == 1e-14)
        throw ConstraintViolation("solve_mode: canonical constraint violated at tau_q");
      tighten *= 0.1;
    }
  }
  const double gamma = linear ? -0.5 * std::log(J / velocity(p.delta_f)) : squeeze_angle(p.delta_f);
  const Bogoliubov b = bogoliubov_map(sol.x1, sol.x2, gamma);
  sol.y1 = b.y1;
  sol.y2 = b.y2;
  sol.p = std::norm(sol.y2);
  sol.Q = std::norm(sol.y1) + sol.p;
  return sol;
}

double pq_asymptotic(double q, const QuenchProtocol& p) {
  const double p0 = (p.delta_f / kPi) * (p.delta_f / kPi);
  const double x = p.J * q * p.tau_q;
  if (std::abs(x) < 1e-8) return p0 * (1.0 - x * x / 3.0);
  const double s = std::sin(x) / x;
  return p0 * s * s;
}

AiryModes airy_f(double q, const QuenchProtocol& p) {
  p.validate();
  if (!(q > 0.0) || !(p.tau_q > 0.0) || p.delta_f == 0.0) {
    throw DomainError("airy_f needs q > 0, tau_q > 0 and delta_f != 0");
  }
  const double tt = p.tau_q * kPi / (4.0 * p.delta_f);
  const double kappa = 1.0 + 4.0 * p.delta_f / kPi;
  const cplx arg(0.0, p.J * q * tt);
  const cplx alpha = std::pow(arg, 2.0 / 3.0);
  const cplx sa = std::pow(arg, 1.0 / 3.0);
  const AiryValues a = airy(alpha);
  const AiryValues b = airy(alpha * kappa);
  const cplx cb = a.bip + sa * a.bi;
  const cplx ca = a.aip + sa * a.ai;
  return {kPi * (cb * b.ai - ca * b.bi), -(kPi / sa) * (cb * b.aip - ca * b.bip)};
}

AiryModes airy_f_asymptotic(double q, const QuenchProtocol& p) {
  if (!(q > 0.0) || !(p.tau_q > 0.0) || p.delta_f == 0.0) {
    throw DomainError("airy_f_asymptotic needs q > 0, tau_q > 0 and delta_f != 0");
  }
  const double kappa = 1.0 + 4.0 * p.delta_f / kPi;
  const double x = p.J * q * p.tau_q * kPi / (4.0 * p.delta_f);  // J q tau~
  const double s = p.J * kPi * p.tau_q / (6.0 * p.delta_f) * (std::pow(kappa, 1.5) - 1.0);
  const cplx I(0.0, 1.0);
  const double k14 = std::pow(kappa, 0.25);
  const cplx fm = std::exp(-I * s * q) / k14 * (1.0 - (1.0 + 5.0 * std::pow(kappa, -1.5)) / (48.0 * I * x)) +
                  std::exp(I * s * q) / (8.0 * I * x * k14);
  // f+ = i f-' / (J q), kept to leading order in each oscillation
  const cplx fp = std::exp(-I * s * q) * k14 - std::exp(I * s * q) * k14 / (8.0 * I * x);
  return {fm, fp};
}

double pq_landau_zener(double q, double z, double a, const QuenchProtocol& p) {
  if (!(q > 0.0) || z < 1.0 || a < z) throw DomainError("pq_landau_zener needs q > 0, z >= 1, a >= z");
  const double r = p.J * std::pow(q, z);
  const double s = p.J * std::pow(q, a);
  return std::exp(-kPi * s * s * p.tau_q / (2.0 * r));
}

}  // namespace kzwork
