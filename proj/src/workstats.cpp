#include "kzwork/workstats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "kzwork/errors.hpp"
#include "kzwork/master_integral.hpp"

namespace kzwork {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// e^z - 1 without cancellation for small |z|
cplx cexpm1(cplx z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

double pair_q(double p, Convention c) { return c == Convention::bosonic ? 1.0 + 2.0 * p : 1.0 - 2.0 * p; }

void check_common(const QuenchProtocol& p, int n_sites, double alpha, ModeSet modes) {
  p.validate();
  if (n_sites < 2 || n_sites % 2 != 0) throw DomainError("N must be even and >= 2");
  if (modes == ModeSet::continuum && !(alpha > 0.0)) throw DomainError("continuum mode set needs alpha > 0");
  if (modes == ModeSet::discrete && !(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
}

struct Grid {
  std::vector<double> breakpoints;
  double q_max;
};

// Panels resolve the sinc^2 lobes (1/(J tau)), the regulator (1/alpha), the
// e^{2iu eps} phase and, when thermal, the occupation scale 1/(beta v).
Grid continuum_grid(const QuenchProtocol& p, double alpha, double u_max, double v) {
  Grid g;
  g.q_max = 40.0 / alpha;
  double w = 0.5 / alpha;
  if (p.tau_q > 0.0) w = std::min(w, kPi / (2.0 * p.J * p.tau_q));
  if (u_max > 0.0) w = std::min(w, kPi / (4.0 * u_max * std::max(v, p.J)));
  if (!p.is_ground() && p.beta > 0.0) w = std::min(w, 1.0 / (p.beta * p.J));
  std::size_t n = std::size_t(std::ceil(g.q_max / w));
  n = std::clamp<std::size_t>(n, 8, 60'000);
  g.breakpoints.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.breakpoints[i] = g.q_max * double(i) / double(n);
  return g;
}

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

// Fornberg weights for derivative orders 0..m at x0 on the given nodes.
std::vector<std::vector<double>> fornberg(double x0, const std::vector<double>& x, int m) {
  const int n = int(x.size()) - 1;
  std::vector<std::vector<std::vector<double>>> d(
      m + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(n + 1, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i <= n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        const double prev = k > 0 ? d[k - 1][i - 1][j] : 0.0;
        d[k][i][j] = ((x[i] - x0) * d[k][i - 1][j] - k * prev) / c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      const double prev = k > 0 ? d[k - 1][i - 1][i - 1] : 0.0;
      d[k][i][i] = c1 / c2 * (k * prev - (x[i - 1] - x0) * d[k][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::vector<std::vector<double>> w(m + 1, std::vector<double>(n + 1));
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= n; ++j) w[k][j] = d[k][n][j];
  return w;
}

// ln of one thermal pair factor, continuous in the mode parameters: the mean phase
// is split off and the remainder must stay in the right half-plane.
cplx thermal_log_factor(double u, double q, double eps_t, double eps_0, double Q, double beta) {
  const double y = beta * eps_0;
  const double kap = (Q * eps_t - eps_0) / std::tanh(0.5 * y);
  const cplx r = pair_factor(u, eps_t, eps_0, Q, beta) * std::exp(-I * (u * kap));
  if (!(r.real() > 0.0)) {
    throw ConvergenceError("thermal CFW: pair factor leaves the principal branch at q = " + std::to_string(q) +
                           ", u = " + std::to_string(u));
  }
  return I * (u * kap) + std::log(r);
}

cplx ground_log_factor(double u, double eps_t, double pq, Convention c) {
  const cplx e = cexpm1(cplx(0.0, 2.0 * u * eps_t));
  const cplx arg = c == Convention::bosonic ? 1.0 - pq * e : 1.0 + pq * e;
  return -std::log(arg);
}

}  // namespace

namespace presets {
double alpha_inset(int n_sites) {
  switch (n_sites) {
    case 4:
      return 3.05;
    case 8:
      return 2.76;
    case 12:
      return 2.72;
    default:
      throw DomainError("no inset cutoff preset for this N");
  }
}
}  // namespace presets

ExcitationSource asymptotic_source(const QuenchProtocol& p) {
  return [p](double q) { return pq_asymptotic(q, p); };
}

ExcitationSource ode_source(const QuenchProtocol& p, const ModeSolverOptions& opts) {
  return [p, opts](double q) { return solve_mode(q, p, opts).p; };
}

std::vector<double> discrete_momenta(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0) throw DomainError("N must be even and >= 2");
  std::vector<double> q;
  for (int n = 1; n <= n_sites / 2; ++n) q.push_back(2.0 * kPi * n / n_sites);
  return q;
}

double adiabatic_shift(const QuenchProtocol& p, double alpha) {
  const double v = luttinger_params(p.delta_f, p.J).v;
  return (v - p.J) / (kPi * alpha * alpha);
}

double ground_energy_shift(const QuenchProtocol& p, int n_sites, double alpha, ModeSet modes) {
  check_common(p, n_sites, alpha, modes);
  if (modes == ModeSet::continuum) return 0.5 * n_sites * adiabatic_shift(p, alpha);
  const double dv = luttinger_params(p.delta_f, p.J).v - p.J;
  double s = 0.0;
  for (double q : discrete_momenta(n_sites)) s += dv * q * std::exp(-alpha * q);
  return s;
}

cplx pair_factor(cplx u, double eps_t, double eps_0, double Q, double beta) {
  const double y = beta * eps_0;
  const cplx a = u * eps_t;
  // B(u) = e^{-ia} (1 - w e^{ia})^2 + i (Q - 1) sin(a) (w^2 - 1), w = e^{-y - iu eps_0}
  const cplx z = -y - I * u * eps_0;
  const cplx e1 = -cexpm1(I * a + z);
  const cplx b = std::exp(-I * a) * e1 * e1 + I * (Q - 1.0) * std::sin(a) * cexpm1(2.0 * z);
  const double b0 = std::expm1(-y);
  // |g denominator| = e^y |B| / 2
  if (std::isfinite(y) && y + std::log(0.5 * std::abs(b)) < std::log(1e-12)) {
    throw PoleProximity("thermal CFW: |g_q denominator| below 1e-12", eps_0, u.real());
  }
  return std::exp(-I * u * eps_0) * (b0 * b0) / b;
}

CfwCurve cfw_ground(std::span<const double> u, const QuenchProtocol& p, int n_sites, double alpha,
                    const ExcitationSource& source, const CfwOptions& opts) {
  check_common(p, n_sites, alpha, opts.modes);
  if (!p.is_ground()) throw DomainError("cfw_ground needs beta = inf");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double eg = ground_energy_shift(p, n_sites, alpha, opts.modes);

  CfwCurve c;
  c.u.assign(u.begin(), u.end());
  c.source = CfwSource::analytic;
  c.meta = {p, n_sites, alpha, opts.modes, opts.convention};
  std::vector<cplx> lg(u.size(), 0.0);

  if (opts.modes == ModeSet::discrete) {
    for (double q : discrete_momenta(n_sites)) {
      const double pq = source(q);
      const double w = std::exp(-alpha * q);
      for (std::size_t i = 0; i < u.size(); ++i) lg[i] += w * ground_log_factor(u[i], v * q, pq, opts.convention);
    }
  } else {
    const Grid g = continuum_grid(p, alpha, max_abs(u), v);
    QuadOptions qo = opts.quad;
    qo.abs_tol = opts.quad.abs_tol * 2.0 * kPi / n_sites;
    const VecQuadResult r = integrate_vec(
        [&](double q, std::span<cplx> out) {
          const double pq = source(q);
          const double w = std::exp(-alpha * q);
          for (std::size_t i = 0; i < u.size(); ++i) out[i] = w * ground_log_factor(u[i], v * q, pq, opts.convention);
        },
        u.size(), g.breakpoints, qo);
    // tail beyond q_max: |ln(1 - p(e^{ix}-1))| <= 2p/(1-2p), decaying at least like e^{-alpha q}
    const double pt = source(g.q_max);
    const double tail = n_sites / (2.0 * kPi) * 2.0 * pt / (1.0 - 2.0 * pt) * std::exp(-alpha * g.q_max) / alpha;
    if (tail > 1e-10) throw QuadratureError("cfw_ground: regulator tail above tolerance");
    for (std::size_t i = 0; i < u.size(); ++i) lg[i] = n_sites / (2.0 * kPi) * r.value[i];
  }
  c.g.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    c.g[i] = u[i] == 0.0 ? cplx(1.0) : std::exp(2.0 * I * u[i] * eg + lg[i]);
  }
  return c;
}

CfwCurve cfw_thermal(std::span<const double> u, const QuenchProtocol& p, int n_sites, double alpha,
                     const ExcitationSource& source, const CfwOptions& opts) {
  check_common(p, n_sites, alpha, opts.modes);
  if (p.is_ground() || !(p.beta > 0.0)) throw DomainError("cfw_thermal needs 0 < beta < inf");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double eg = ground_energy_shift(p, n_sites, alpha, opts.modes);

  CfwCurve c;
  c.u.assign(u.begin(), u.end());
  c.source = CfwSource::analytic;
  c.meta = {p, n_sites, alpha, opts.modes, opts.convention};
  std::vector<cplx> lg(u.size(), 0.0);

  auto mode_logs = [&](double q, double w, std::span<cplx> out) {
    const double Q = pair_q(source(q), opts.convention);
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = u[i] == 0.0 ? cplx(0.0) : w * thermal_log_factor(u[i], q, v * q, p.J * q, Q, p.beta);
    }
  };

  if (opts.modes == ModeSet::discrete) {
    std::vector<cplx> tmp(u.size());
    for (double q : discrete_momenta(n_sites)) {
      mode_logs(q, std::exp(-alpha * q), tmp);
      for (std::size_t i = 0; i < u.size(); ++i) lg[i] += tmp[i];
    }
  } else {
    const Grid g = continuum_grid(p, alpha, max_abs(u), v);
    QuadOptions qo = opts.quad;
    qo.abs_tol = opts.quad.abs_tol * 2.0 * kPi / n_sites;
    const VecQuadResult r =
        integrate_vec([&](double q, std::span<cplx> out) { mode_logs(q, std::exp(-alpha * q), out); }, u.size(),
                      g.breakpoints, qo);
    for (std::size_t i = 0; i < u.size(); ++i) lg[i] = n_sites / (2.0 * kPi) * r.value[i];
  }
  c.g.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    c.g[i] = u[i] == 0.0 ? cplx(1.0) : std::exp(I * u[i] * eg + lg[i]);
  }
  return c;
}

cplx cfw_thermal_at(cplx u, const QuenchProtocol& p, int n_sites, double alpha, const ExcitationSource& source,
                    const CfwOptions& opts) {
  check_common(p, n_sites, alpha, opts.modes);
  if (p.is_ground() || !(p.beta > 0.0)) throw DomainError("cfw_thermal_at needs 0 < beta < inf");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double eg = ground_energy_shift(p, n_sites, alpha, opts.modes);
  auto term = [&](double q) {
    const double Q = pair_q(source(q), opts.convention);
    return std::exp(-alpha * q) * std::log(pair_factor(u, v * q, p.J * q, Q, p.beta));
  };
  cplx lg = 0.0;
  if (opts.modes == ModeSet::discrete) {
    for (double q : discrete_momenta(n_sites)) lg += term(q);
  } else {
    const Grid g = continuum_grid(p, alpha, std::abs(u), v);
    QuadOptions qo = opts.quad;
    qo.abs_tol = opts.quad.abs_tol * 2.0 * kPi / n_sites;
    const VecQuadResult r =
        integrate_vec([&](double q, std::span<cplx> out) { out[0] = term(q); }, 1, g.breakpoints, qo);
    lg = n_sites / (2.0 * kPi) * r.value[0];
  }
  return std::exp(I * u * eg + lg);
}

double partition_ratio(const QuenchProtocol& p, int n_sites, double alpha, ModeSet modes, const QuadOptions& quad) {
  check_common(p, n_sites, alpha, modes);
  if (p.is_ground() || !(p.beta > 0.0)) throw DomainError("partition_ratio needs 0 < beta < inf");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double eg = ground_energy_shift(p, n_sites, alpha, modes);
  // ln sinh(x) for x > 0 without overflow
  auto log_sinh = [](double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); };
  auto term = [&](double q) {
    return std::exp(-alpha * q) * 2.0 * (log_sinh(0.5 * p.beta * p.J * q) - log_sinh(0.5 * p.beta * v * q));
  };
  double lz = 0.0;
  if (modes == ModeSet::discrete) {
    for (double q : discrete_momenta(n_sites)) lz += term(q);
  } else {
    const Grid g = continuum_grid(p, alpha, 0.0, v);
    QuadOptions qo = quad;
    qo.abs_tol = quad.abs_tol * 2.0 * kPi / n_sites;
    const VecQuadResult r =
        integrate_vec([&](double q, std::span<cplx> out) { out[0] = term(q); }, 1, g.breakpoints, qo);
    lz = n_sites / (2.0 * kPi) * r.value[0].real();
  }
  return std::exp(-p.beta * eg + lz);
}

std::vector<double> stencil_grid(double h) {
  if (!(h > 0.0)) throw DomainError("stencil spacing must be positive");
  std::vector<double> u;
  for (int j = -8; j <= 8; ++j) u.push_back(j * h);
  return u;
}

double default_stencil_spacing(int n_sites, double J) { return 0.02 / (n_sites * J); }

CumulantSet cumulants_from_cfw(const CfwCurve& curve, int n_max) {
  if (n_max < 1 || n_max > 4) throw DomainError("cumulants_from_cfw: 1 <= n_max <= 4");
  const std::size_t n = curve.u.size();
  if (n != curve.g.size() || n < 9) throw DomainError("cumulants_from_cfw: curve too short");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return curve.u[a] < curve.u[b]; });
  std::size_t i0 = n;
  for (std::size_t k = 0; k < n; ++k)
    if (curve.u[order[k]] == 0.0) i0 = k;
  if (i0 == n) throw DomainError("cumulants_from_cfw: grid lacks u = 0");

  // unwrap phase outward from u = 0
  std::vector<cplx> lg(n);
  lg[i0] = std::log(curve.g[order[i0]]);
  lg[i0] = {lg[i0].real(), 0.0};
  auto step = [&](std::size_t from, std::size_t to) {
    const cplx gv = curve.g[order[to]];
    if (gv == cplx(0.0)) throw GridTooCoarse("cumulants_from_cfw: G vanishes on the grid");
    const double ph = std::arg(gv);
    double d = std::remainder(ph - lg[from].imag(), 2.0 * kPi);
    if (std::abs(d) > 0.5 * kPi) throw GridTooCoarse("cumulants_from_cfw: phase jump above pi/2 between samples");
    lg[to] = {std::log(std::abs(gv)), lg[from].imag() + d};
  };
  for (std::size_t k = i0; k + 1 < n; ++k) step(k, k + 1);
  for (std::size_t k = i0; k > 0; --k) step(k, k - 1);

  // spacing = smallest positive |u|
  double h = std::numeric_limits<double>::infinity();
  for (double x : curve.u)
    if (x > 0.0) h = std::min(h, x);
  auto find = [&](double target) -> const cplx* {
    const double tol = 1e-9 * h;
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(curve.u[order[k]] - target) <= tol) return &lg[k];
    return nullptr;
  };
  auto gather = [&](double spacing, std::array<cplx, 9>& out) {
    for (int j = -4; j <= 4; ++j) {
      const cplx* v = find(j * spacing);
      if (!v) return false;
      out[std::size_t(j + 4)] = *v;
    }
    return true;
  };
  std::array<cplx, 9> s1, s2;
  if (!gather(h, s1)) throw DomainError("cumulants_from_cfw: grid lacks a 9-point stencil around u = 0");
  const bool rich = gather(2.0 * h, s2);

  std::vector<double> nodes;
  for (int j = -4; j <= 4; ++j) nodes.push_back(j);
  const auto w = fornberg(0.0, nodes, 4);
  const int order_acc[5] = {0, 8, 8, 6, 6};

  double lg_max = 0.0;
  for (const cplx& z : s1) lg_max = std::max(lg_max, std::abs(z));
  for (const cplx& z : s2) lg_max = std::max(lg_max, std::abs(z));

  CumulantSet out;
  out.method = CumulantMethod::finite_difference;
  out.alpha = curve.meta.alpha;
  out.n_max = n_max;
  cplx in = 1.0;
  for (int d = 1; d <= n_max; ++d) {
    in *= -I;  // i^{-d}
    cplx d1 = 0.0, d2 = 0.0;
    double wsum = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
      d1 += w[d][j] * s1[j];
      if (rich) d2 += w[d][j] * s2[j];
      wsum += std::abs(w[d][j]);
    }
    d1 /= std::pow(h, d);
    cplx k = d1;
    if (rich) {
      d2 /= std::pow(2.0 * h, d);
      const double f = std::pow(2.0, order_acc[d]);
      k = (f * d1 - d2) / (f - 1.0);
    }
    k *= in;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * wsum * std::max(lg_max, 1e-300) /
                         std::pow(h, d);
    const double resid = std::abs(k.imag());
    out.max_imag_residue = std::max(out.max_imag_residue, resid);
    if (resid > 1e-8 * std::abs(k.real()) + floor) {
      throw ConvergenceError("cumulants_from_cfw: imaginary residue of kappa_" + std::to_string(d) +
                             " above tolerance");
    }
    out.kappa.push_back(k.real());
  }
  return out;
}

CumulantSet cumulant_integrals_ground(const QuenchProtocol& p, double alpha, int n_sites, int n_max,
                                      Convention conv) {
  check_common(p, n_sites, alpha, ModeSet::continuum);
  if (!p.is_ground()) throw DomainError("cumulant_integrals_ground needs beta = inf");
  if (n_max < 1 || n_max > 4) throw DomainError("cumulant_integrals_ground: 1 <= n_max <= 4");
  CumulantSet out;
  out.method = CumulantMethod::analytic_integral;
  out.alpha = alpha;
  out.n_max = n_max;
  const double N = n_sites;
  const double mu = adiabatic_shift(p, alpha);
  if (p.delta_f == 0.0 || p.tau_q == 0.0) {
    if (p.tau_q == 0.0 && p.delta_f != 0.0) throw DomainError("cumulant_integrals_ground needs tau_q > 0");
    out.kappa.assign(std::size_t(n_max), 0.0);
    out.kappa[0] = N * mu;
    return out;
  }
  // pair-count cumulant polynomials: geometric (bosonic) or Bernoulli with flipped sign (printed)
  static const std::vector<std::vector<double>> geo = {{1}, {1, 1}, {1, 3, 2}, {1, 7, 12, 6}};
  const double sgn = conv == Convention::bosonic ? 1.0 : -1.0;
  for (int n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (int m = 1; m <= n; ++m) {
      const double c = geo[std::size_t(n - 1)][std::size_t(m - 1)] * (m % 2 == 1 ? 1.0 : sgn);
      s += c * master_integral(n, m, p, alpha).value;
    }
    const double pref = std::pow(2.0, n - 1) * N / kPi;
    out.kappa.push_back(sgn * pref * s + (n == 1 ? N * mu : 0.0));
  }
  return out;
}

CumulantSet cumulants_discrete_ground(const QuenchProtocol& p, int n_sites, double alpha,
                                      const ExcitationSource& source, int n_max, Convention conv) {
  check_common(p, n_sites, alpha, ModeSet::discrete);
  if (!p.is_ground()) throw DomainError("cumulants_discrete_ground needs beta = inf");
  if (n_max < 1 || n_max > 4) throw DomainError("cumulants_discrete_ground: 1 <= n_max <= 4");
  static const std::vector<std::vector<double>> geo = {{1}, {1, 1}, {1, 3, 2}, {1, 7, 12, 6}};
  const double sgn = conv == Convention::bosonic ? 1.0 : -1.0;
  const double v = luttinger_params(p.delta_f, p.J).v;
  CumulantSet out;
  out.method = CumulantMethod::analytic_integral;
  out.alpha = alpha;
  out.n_max = n_max;
  out.kappa.assign(std::size_t(n_max), 0.0);
  out.kappa[0] = 2.0 * ground_energy_shift(p, n_sites, alpha, ModeSet::discrete);
  for (double q : discrete_momenta(n_sites)) {
    const double pq = source(q);
    const double w = std::exp(-alpha * q);
    for (int n = 1; n <= n_max; ++n) {
      double c = 0.0;
      for (int m = n; m >= 1; --m)
        c = c * pq + geo[std::size_t(n - 1)][std::size_t(m - 1)] * (m % 2 == 1 ? 1.0 : sgn);
      out.kappa[std::size_t(n - 1)] += sgn * w * std::pow(2.0 * v * q, n) * c * pq;
    }
  }
  return out;
}

CumulantSet cumulants_thermal(const QuenchProtocol& p, double alpha, int n_sites, const ExcitationSource& source,
                              Convention conv, const QuadOptions& quad) {
  check_common(p, n_sites, alpha, ModeSet::continuum);
  if (p.is_ground() || !(p.beta > 0.0)) throw DomainError("cumulants_thermal needs 0 < beta < inf");
  const double v = luttinger_params(p.delta_f, p.J).v;
  const double beta = p.beta;
  auto integrand = [&](double q, std::span<cplx> out) {
    const double et = v * q, e0 = p.J * q;
    const double Q = pair_q(source(q), conv);
    const double y = beta * e0;
    const double w = std::exp(-alpha * q);
    const double d = Q * et - e0;
    out[0] = w * d / std::tanh(0.5 * y);
    // csch^2(y/2) = 4 e^{-y} / (1 - e^{-y})^2,  cosh(y) csch^2(y/2) = 2 (1 + e^{-2y}) / (1 - e^{-y})^2
    const double em = std::expm1(-y);  // e^{-y} - 1
    const double csch2 = 4.0 * std::exp(-y) / (em * em);
    const double cosh_csch2 = 2.0 * (1.0 + std::exp(-2.0 * y)) / (em * em);
    out[1] = w * 0.5 * (d * d * csch2 - (1.0 - Q * Q) * et * et * cosh_csch2);
  };
  const Grid g = continuum_grid(p, alpha, 0.0, v);
  QuadOptions qo = quad;
  qo.abs_tol = quad.abs_tol * 2.0 * kPi / n_sites;
  const VecQuadResult r = integrate_vec(integrand, 2, g.breakpoints, qo);
  // tail: integrands grow at most like q^2 coth^2 against e^{-alpha q}
  const double qm = g.q_max;
  const double occ = 1.0 + 2.0 / (beta * p.J * qm);
  const double tail = n_sites / (2.0 * kPi) * (v * qm) * (v * qm) * 4.0 * occ * occ * std::exp(-alpha * qm) / alpha;
  if (tail > 1e-8 * std::max(1.0, std::abs(r.value[1].real()))) {
    throw QuadratureError("cumulants_thermal: regulator tail above tolerance");
  }
  CumulantSet out;
  out.method = CumulantMethod::analytic_integral;
  out.alpha = alpha;
  out.n_max = 2;
  const double pref = n_sites / (2.0 * kPi);
  out.kappa = {ground_energy_shift(p, n_sites, alpha, ModeSet::continuum) + pref * r.value[0].real(),
               pref * r.value[1].real()};
  return out;
}

CfwInvariants check_invariants(const CfwCurve& curve) {
  CfwInvariants inv;
  bool sym = true;
  for (std::size_t i = 0; i < curve.u.size(); ++i) {
    const double ui = curve.u[i];
    const cplx gi = curve.g[i];
    if (ui == 0.0) inv.normalization = std::max(inv.normalization, std::abs(gi - 1.0));
    inv.bound = std::max(inv.bound, std::abs(gi) - 1.0);
    bool found = false;
    for (std::size_t j = 0; j < curve.u.size(); ++j) {
      if (curve.u[j] == -ui) {
        inv.hermitian = std::max(inv.hermitian, std::abs(curve.g[j] - std::conj(gi)));
        found = true;
        break;
      }
    }
    sym = sym && found;
  }
  inv.symmetric_grid = sym && !curve.u.empty();
  inv.bound = std::max(inv.bound, 0.0);
  return inv;
}

std::string to_string(CfwSource s) {
  switch (s) {
    case CfwSource::analytic:
      return "analytic";
    case CfwSource::ed:
      return "ed";
    case CfwSource::oracle:
      return "oracle";
  }
  return "?";
}

std::string to_string(CumulantMethod m) {
  switch (m) {
    case CumulantMethod::analytic_integral:
      return "analytic-integral";
    case CumulantMethod::finite_difference:
      return "finite-difference";
    case CumulantMethod::ttm_moments:
      return "ttm-moments";
  }
  return "?";
}

}  // namespace kzwork
