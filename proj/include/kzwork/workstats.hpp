#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kzwork/luttinger.hpp"
#include "kzwork/protocol.hpp"
#include "kzwork/quadrature.hpp"

namespace kzwork {

enum class CfwSource { analytic, ed, oracle };

// Mode sums: q = 2 pi n / N, n = 1..N/2, or the regulated continuum integral.
enum class ModeSet { continuum, discrete };

// Pair statistics of the excited modes.
//   bosonic: Q = 1 + 2p, ground factor 1 / (1 - p(e^{ix} - 1)); matches the Fock-space trace.
//   printed: Q = 1 - 2p, ground factor 1 / (1 + p(e^{ix} - 1)); the published sign choice.
enum class Convention { bosonic, printed };

struct CfwMeta {
  QuenchProtocol protocol;
  int n_sites = 0;
  double alpha = 0.0;
  ModeSet modes = ModeSet::continuum;
  Convention convention = Convention::bosonic;
};

struct CfwCurve {
  std::vector<double> u;
  std::vector<std::complex<double>> g;
  CfwSource source = CfwSource::analytic;
  CfwMeta meta;
};

// p_q as a function of q.
using ExcitationSource = std::function<double(double)>;
ExcitationSource asymptotic_source(const QuenchProtocol& p);
ExcitationSource ode_source(const QuenchProtocol& p, const ModeSolverOptions& opts = {});

struct CfwOptions {
  ModeSet modes = ModeSet::continuum;
  Convention convention = Convention::bosonic;
  QuadOptions quad{1e-14, 1e-12, 400'000};
};

namespace presets {
inline constexpr double alpha_fig_main = 3.51;  // N = 12 panels
// Inset cutoffs for N = 4, 8, 12; DomainError for other N.
double alpha_inset(int n_sites);
}  // namespace presets

std::vector<double> discrete_momenta(int n_sites);
// mu = pi^{-1} int dq (eps^tau - eps^0) e^{-alpha q} = (v - J) / (pi alpha^2)
double adiabatic_shift(const QuenchProtocol& p, double alpha);
// E_g^tau: sum_q w_q (eps^tau_q - eps^0_q) on the discrete set, N mu / 2 in the continuum.
double ground_energy_shift(const QuenchProtocol& p, int n_sites, double alpha, ModeSet modes);

// ln G = 2 i u E_g - sum_q w_q ln[1 -+ p_q (e^{2iu eps_q} - 1)] with w_q = e^{-alpha q}
// (N int dq/2pi in the continuum). Needs beta = inf, even N, alpha > 0 (alpha = 0
// allowed on the discrete set).
CfwCurve cfw_ground(std::span<const double> u, const QuenchProtocol& p, int n_sites, double alpha,
                    const ExcitationSource& source, const CfwOptions& opts = {});

// G(u) = e^{iu E_g} prod_q [g_q(u)/g_q(0)]^{w_q}, finite beta.
CfwCurve cfw_thermal(std::span<const double> u, const QuenchProtocol& p, int n_sites, double alpha,
                     const ExcitationSource& source, const CfwOptions& opts = {});

// Thermal CFW at complex u (e.g. u = i beta for the Jarzynski identity).
std::complex<double> cfw_thermal_at(std::complex<double> u, const QuenchProtocol& p, int n_sites, double alpha,
                                    const ExcitationSource& source, const CfwOptions& opts = {});

// Z_tau / Z_0 of the quadratic mode Hamiltonians (zero-point energies and E_g included),
// on the same mode set and weights as cfw_thermal.
double partition_ratio(const QuenchProtocol& p, int n_sites, double alpha, ModeSet modes,
                       const QuadOptions& quad = {});

// Single-pair factor g_q(u)/g_q(0) in a scaled form that is stable for any beta eps.
std::complex<double> pair_factor(std::complex<double> u, double eps_tau, double eps_0, double Q, double beta);

enum class CumulantMethod { analytic_integral, finite_difference, ttm_moments };

struct CumulantSet {
  std::vector<double> kappa;  // kappa[0] = kappa_1
  CumulantMethod method = CumulantMethod::analytic_integral;
  double alpha = 0.0;  // 0 when no regulator applies
  int n_max = 0;
  double max_imag_residue = 0.0;  // finite-difference only
  double at(int n) const { return kappa.at(std::size_t(n - 1)); }
};

// Stencil points {j h : j = -8..8}: a 9-point central stencil at spacing h plus the
// one at 2h used for Richardson extrapolation.
std::vector<double> stencil_grid(double h);
double default_stencil_spacing(int n_sites, double J);

// kappa_n = i^{-n} d^n ln G / du^n at u = 0 from central differences on the curve's
// stencil points, phase unwrapped outward from u = 0 along the full grid.
// Throws GridTooCoarse when adjacent samples differ in phase by more than pi/2,
// ConvergenceError when the imaginary residue exceeds 1e-8 |kappa_n| plus the
// rounding floor.
CumulantSet cumulants_from_cfw(const CfwCurve& curve, int n_max);

// Closed-form ground-state cumulants (n_max <= 4) from master_integral.
CumulantSet cumulant_integrals_ground(const QuenchProtocol& p, double alpha, int n_sites, int n_max = 3,
                                      Convention conv = Convention::bosonic);

// Exact cumulants of the discrete-mode ground CFW: per pair, kappa_n picks up
// w_q (2 eps_q)^n times the n-th cumulant of the pair count (geometric for bosonic,
// negated Bernoulli for printed), plus 2 E_g for n = 1. alpha = 0 allowed; tau_q = 0 allowed.
CumulantSet cumulants_discrete_ground(const QuenchProtocol& p, int n_sites, double alpha,
                                      const ExcitationSource& source, int n_max = 3,
                                      Convention conv = Convention::bosonic);

// kappa_1 = E_g + N int dq/2pi (Q eps^tau - eps^0) coth(beta eps^0 / 2) e^{-alpha q}
// kappa_2 = N/2 int dq/2pi [(Q eps^tau - eps^0)^2 - (1 - Q^2) (eps^tau)^2 cosh(beta eps^0)]
//           csch^2(beta eps^0 / 2) e^{-alpha q}
CumulantSet cumulants_thermal(const QuenchProtocol& p, double alpha, int n_sites,
                              const ExcitationSource& source, Convention conv = Convention::bosonic,
                              const QuadOptions& quad = {1e-14, 1e-12, 400'000});

struct CfwInvariants {
  double normalization = 0.0;  // |G(0) - 1|
  double hermitian = 0.0;      // max |G(-u) - conj G(u)| over mirrored samples
  double bound = 0.0;          // max(|G| - 1, 0)
  bool symmetric_grid = false;
};
CfwInvariants check_invariants(const CfwCurve& curve);

std::string to_string(CfwSource s);
std::string to_string(CumulantMethod m);

}  // namespace kzwork
