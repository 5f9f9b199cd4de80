#pragma once

#include <complex>
#include <cstddef>

#include "kzwork/protocol.hpp"

namespace kzwork {

using cplx = std::complex<double>;

struct LuttingerParams {
  double v;  // units of J * lattice spacing
  double K;
};

// Bethe-ansatz TLL parameters of the XXZ chain. delta = 1 returns the boundary
// values v = 0, K = 1/2; |delta| > 1 throws DomainError.
LuttingerParams luttinger_params(double delta, double J = 1.0);

// d ln v / d Delta and d ln K / d Delta, for |delta| < 1.
double dlog_v(double delta);
double dlog_K(double delta);

struct CouplingFactors {
  double omega_factor;   // 1 + g4(t)
  double lambda_factor;  // g2(t)
};

// (1 + g4, g2) backed out of vK = vF(1 + g4 - g2), v/K = vF(1 + g4 + g2) with vF = J.
CouplingFactors coupling_profile(double t, const QuenchProtocol& p);

enum class VelocityProfile {
  bethe_ansatz,  // exact v(t), K(t)
  linearized,    // v = J sqrt(1 + 4 Delta / pi), vK = J; the profile solved by Airy functions
};

struct ModeSolverOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  VelocityProfile profile = VelocityProfile::bethe_ansatz;
};

struct ModeSolution {
  double q = 0.0;
  cplx x1, x2;  // Heisenberg coefficients of the b operators at tau_q
  cplx y1, y2;  // coefficients of the diagonal d operators
  double p = 0.0;  // |y2|^2
  double Q = 1.0;  // |y1|^2 + |y2|^2 = 1 + 2p
  cplx f_minus, f_plus;  // at t = tau_q
  double max_constraint_drift = 0.0;  // max_t ||x1|^2 - |x2|^2 - 1| along the trajectory
  std::size_t steps = 0;
};

// gamma_tau = -1/2 ln K(delta_f).
double squeeze_angle(double delta_f);

struct Bogoliubov {
  cplx y1, y2;
};
// Maps (x1, x2) to the coefficients of the instantaneous normal modes.
Bogoliubov bogoliubov_map(cplx x1, cplx x2, double gamma_tau, double gamma_0 = 0.0);

// Integrates the mode equation for one momentum. Throws StepBudgetExceeded or
// ConstraintViolation (final ||x1|^2 - |x2|^2 - 1| > 10 rel_tol).
ModeSolution solve_mode(double q, const QuenchProtocol& p, const ModeSolverOptions& opts = {});

// p0 sinc^2(J q tau_q), p0 = (delta_f / pi)^2.
double pq_asymptotic(double q, const QuenchProtocol& p);

struct AiryModes {
  cplx f_minus, f_plus;
};
// Closed-form solution of the linearized profile at t = tau_q.
AiryModes airy_f(double q, const QuenchProtocol& p);
// Large-J q tau~ expansion of the same; f_minus to O(1/(J q tau~)), f_plus to leading order.
AiryModes airy_f_asymptotic(double q, const QuenchProtocol& p);

// exp(-pi s^2 tau_q / (2 r)) with r = J q^z, s = J q^a.
double pq_landau_zener(double q, double z, double a, const QuenchProtocol& p);

}  // namespace kzwork
