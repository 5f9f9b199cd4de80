#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "kzwork/fock_oracle.hpp"
#include "kzwork/io.hpp"
#include "kzwork/luttinger.hpp"
#include "kzwork/scaling_fit.hpp"
#include "kzwork/workstats.hpp"
#include "kzwork/xxz_ed.hpp"

namespace kzwork::cli {
namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

double num(const json& cfg, const char* key, double def) {
  if (!cfg.contains(key)) return def;
  const json& v = cfg.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    throw DomainError(std::string(key) + ": expected a number, got \"" + s + "\"");
  }
  return v.get<double>();
}

double required(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw DomainError(std::string("missing parameter: ") + key);
  return num(cfg, key, 0.0);
}

std::string str(const json& cfg, const char* key, const std::string& def) {
  return cfg.contains(key) ? cfg.at(key).get<std::string>() : def;
}

template <class E>
E choose(const json& cfg, const char* key, std::initializer_list<std::pair<const char*, E>> opts) {
  const std::string v = str(cfg, key, opts.begin()->first);
  for (const auto& [name, e] : opts)
    if (v == name) return e;
  throw DomainError(std::string(key) + ": unknown value \"" + v + "\"");
}

QuenchProtocol protocol(const json& cfg) {
  QuenchProtocol p{num(cfg, "J", 1.0), num(cfg, "delta_f", 0.0), num(cfg, "tau_q", 0.0), num(cfg, "beta", kInf)};
  p.validate();
  return p;
}

int sites(const json& cfg) { return int(num(cfg, "n", 12)); }

double alpha(const json& cfg) { return num(cfg, "alpha", presets::alpha_fig_main); }

ChainSpec chain(const json& cfg) {
  ChainSpec c{sites(cfg), cfg.value("pbc", true), 0};
  c.validate();
  return c;
}

// {min, max, points, log}; log spacing needs min > 0.
std::vector<double> range(const json& r, const char* what) {
  const double lo = r.at("min").get<double>(), hi = r.at("max").get<double>();
  const int n = r.at("points").get<int>();
  const bool log = r.value("log", false);
  if (n < 1 || hi < lo || (n > 1 && hi == lo) || (log && !(lo > 0.0)))
    throw DomainError(std::string(what) + ": degenerate range");
  std::vector<double> x;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    // linear points measured from the midpoint so that symmetric ranges mirror exactly
    const double s = n == 1 ? -1.0 : double(2 * i - (n - 1)) / double(n - 1);
    x.push_back(log ? lo * std::pow(hi / lo, t) : 0.5 * (lo + hi) + 0.5 * (hi - lo) * s);
  }
  return x;
}

std::vector<double> u_grid(const json& cfg) {
  if (cfg.contains("u") && cfg.at("u").is_array()) return cfg.at("u").get<std::vector<double>>();
  json def = {{"min", -1.0}, {"max", 1.0}, {"points", 41}};
  return range(cfg.contains("u") ? cfg.at("u") : def, "u");
}

CfwOptions cfw_options(const json& cfg) {
  CfwOptions o;
  o.modes = choose<ModeSet>(cfg, "modes", {{"continuum", ModeSet::continuum}, {"discrete", ModeSet::discrete}});
  o.convention = choose<Convention>(cfg, "convention", {{"bosonic", Convention::bosonic}, {"printed", Convention::printed}});
  return o;
}

ExcitationSource excitation(const json& cfg, const QuenchProtocol& p) {
  const std::string s = str(cfg, "pq", "asymptotic");
  if (s == "asymptotic") return asymptotic_source(p);
  if (s == "ode") return ode_source(p);
  throw DomainError("pq: unknown value \"" + s + "\"");
}

enum class Source { analytic, ed };
Source source(const json& cfg) { return choose<Source>(cfg, "source", {{"analytic", Source::analytic}, {"ed", Source::ed}}); }

CfwCurve analytic_cfw(const json& cfg, const QuenchProtocol& p, std::span<const double> u) {
  const CfwOptions o = cfw_options(cfg);
  const ExcitationSource src = excitation(cfg, p);
  return p.is_ground() ? cfw_ground(u, p, sites(cfg), alpha(cfg), src, o)
                       : cfw_thermal(u, p, sites(cfg), alpha(cfg), src, o);
}

// Runs f(i) for i in [0, n) on up to `workers` threads; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto body = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int t = std::clamp(workers, 1, int(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int k = 1; k < t; ++k) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int cmd_params(const json& cfg, std::ostream& out) {
  const double J = num(cfg, "J", 1.0);
  const LuttingerParams lp = luttinger_params(required(cfg, "delta"), J);
  out << "v/J=" << io::format_double(lp.v / J) << " K=" << io::format_double(lp.K) << '\n';
  return ok;
}

int cmd_modes(const json& cfg, std::ostream& out) {
  const QuenchProtocol p = protocol(cfg);
  std::vector<double> q;
  if (cfg.contains("q") && cfg.at("q").is_array())
    q = cfg.at("q").get<std::vector<double>>();
  else
    q = range(cfg.contains("q") ? cfg.at("q") : json{{"min", 0.1}, {"max", 2.0}, {"points", 20}}, "q");
  ModeSolverOptions o;
  o.profile = choose<VelocityProfile>(cfg, "profile",
                                      {{"bethe_ansatz", VelocityProfile::bethe_ansatz}, {"linearized", VelocityProfile::linearized}});
  std::vector<ModeSolution> sol(q.size());
  parallel_for(q.size(), int(num(cfg, "workers", 1)), [&](std::size_t i) { sol[i] = solve_mode(q[i], p, o); });
  json arr = json::array();
  for (const auto& s : sol) arr.push_back(io::to_json(s));
  out << json{{"protocol", io::to_json(p)}, {"modes", arr}}.dump(2) << '\n';
  return ok;
}

int cmd_cfw(const json& cfg, std::ostream& out) {
  const QuenchProtocol p = protocol(cfg);
  const std::vector<double> u = u_grid(cfg);
  const CfwCurve c = source(cfg) == Source::analytic ? analytic_cfw(cfg, p, u) : cfw_ed(chain(cfg), p, u);
  io::write_cfw_csv(out, c);
  return ok;
}

int cmd_cumulants(const json& cfg, std::ostream& out) {
  const QuenchProtocol p = protocol(cfg);
  const int n_max = int(num(cfg, "n_max", 3));
  const std::string method = str(cfg, "method", "integral");
  CumulantSet k;
  if (source(cfg) == Source::ed) {
    k = ttm_cumulants(work_distribution(chain(cfg), p), n_max);
  } else if (method == "fd") {
    const double h = num(cfg, "h", default_stencil_spacing(sites(cfg), p.J));
    k = cumulants_from_cfw(analytic_cfw(cfg, p, stencil_grid(h)), n_max);
  } else if (method == "integral") {
    const CfwOptions o = cfw_options(cfg);
    if (!p.is_ground())
      k = cumulants_thermal(p, alpha(cfg), sites(cfg), excitation(cfg, p), o.convention);
    else if (o.modes == ModeSet::discrete)
      k = cumulants_discrete_ground(p, sites(cfg), alpha(cfg), excitation(cfg, p), n_max, o.convention);
    else
      k = cumulant_integrals_ground(p, alpha(cfg), sites(cfg), n_max, o.convention);
  } else {
    throw DomainError("method: unknown value \"" + method + "\"");
  }
  out << json{{"protocol", io::to_json(p)}, {"n", sites(cfg)}, {"cumulants", io::to_json(k)}}.dump(2) << '\n';
  return ok;
}

int cmd_sweep(const json& cfg, std::ostream& out, std::ostream& fit_out) {
  if (!cfg.contains("tau")) throw DomainError("sweep: missing tau range");
  json tr = cfg.at("tau");
  if (!tr.contains("log")) tr["log"] = true;
  const std::vector<double> taus = range(tr, "tau");
  if (taus.size() < 6 || taus.back() < 10.0 * taus.front())
    throw DomainError("sweep: need >= 6 points spanning >= one decade of tau_q");
  const bool fast = choose<bool>(cfg, "branch", {{"fast", true}, {"slow", false}});
  const Source src = source(cfg);
  const int n_max = int(num(cfg, "n_max", 3));
  const QuenchProtocol base = protocol(cfg);
  if (src == Source::analytic && !base.is_ground()) throw DomainError("sweep: analytic sweeps need beta = inf");

  auto kappas = [&](double tau) {
    QuenchProtocol p = base;
    p.tau_q = tau;
    if (src == Source::ed) return ttm_cumulants(work_distribution(chain(cfg), p), n_max).kappa;
    const CfwOptions o = cfw_options(cfg);
    if (o.modes == ModeSet::discrete || tau == 0.0)
      return cumulants_discrete_ground(p, sites(cfg), alpha(cfg), excitation(cfg, p), n_max, o.convention).kappa;
    return cumulant_integrals_ground(p, alpha(cfg), sites(cfg), n_max, o.convention).kappa;
  };
  std::vector<std::vector<double>> raw(taus.size());
  parallel_for(taus.size(), int(num(cfg, "workers", 1)), [&](std::size_t i) { raw[i] = kappas(taus[i]); });

  // Reference: sudden limit (fast) or plateau / adiabatic value (slow).
  std::vector<double> ref(static_cast<std::size_t>(n_max), 0.0);
  if (fast) {
    ref = kappas(0.0);
  } else if (src == Source::ed) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < taus.size(); ++i)
      if (taus[i] >= taus.back() / 10.0) {
        for (int n = 0; n < n_max; ++n) ref[std::size_t(n)] += raw[i][std::size_t(n)];
        ++cnt;
      }
    for (double& r : ref) r /= double(cnt);
  } else {
    ref[0] = cfw_options(cfg).modes == ModeSet::discrete
                 ? 2.0 * ground_energy_shift(base, sites(cfg), alpha(cfg), ModeSet::discrete)
                 : sites(cfg) * adiabatic_shift(base, alpha(cfg));
  }

  std::vector<std::string> header{"tau_q"};
  for (int n = 1; n <= n_max; ++n) header.push_back("kappa_" + std::to_string(n));
  for (int n = 1; n <= n_max; ++n) header.push_back("dkappa_" + std::to_string(n));
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<ScalingPoint>> pts(static_cast<std::size_t>(n_max));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    std::vector<double> row{taus[i]};
    row.insert(row.end(), raw[i].begin(), raw[i].end());
    for (int n = 0; n < n_max; ++n) {
      const double d = std::abs(raw[i][std::size_t(n)] - ref[std::size_t(n)]);
      row.push_back(d);
      if (d > 0.0) pts[std::size_t(n)].emplace_back(taus[i], d);
    }
    rows.push_back(std::move(row));
  }
  io::write_csv(out, header, rows);

  // Slow ED curves oscillate with period ~ pi / (J q_min); fit their upper envelope.
  const bool envelope = !fast && src == Source::ed;
  const double window = 0.5 * sites(cfg) / base.J;
  json fits = json::array();
  for (int n = 0; n < n_max; ++n) {
    std::vector<ScalingPoint> use = envelope ? upper_envelope(pts[std::size_t(n)], window) : pts[std::size_t(n)];
    // Only the plateau-free part of the slow branch carries the power law.
    if (envelope)
      use.erase(std::remove_if(use.begin(), use.end(), [&](const ScalingPoint& s) { return s.first >= taus.back() / 10.0; }),
                use.end());
    json f = {{"n", n + 1}, {"points", use.size()}};
    try {
      const ScalingFit sf = fit_scaling(use, !fast && n == 0);
      f.update({{"exponent", sf.exponent}, {"log_correction", sf.log_correction}, {"r_squared", sf.r_squared},
                {"prefactor", sf.prefactor}, {"tau_min", sf.tau_min}, {"tau_max", sf.tau_max}});
    } catch (const DomainError& e) {
      f["error"] = e.what();
    }
    fits.push_back(f);
  }
  fit_out << json{{"branch", fast ? "fast" : "slow"}, {"source", src == Source::ed ? "ed" : "analytic"},
                  {"reference", ref}, {"fits", fits}}
                 .dump(2)
          << '\n';
  return ok;
}

int cmd_ed(const json& cfg, std::ostream& out) {
  const QuenchProtocol p = protocol(cfg);
  const ChainSpec c = chain(cfg);
  const Transitions t = ttm_transitions(c, p);
  const WorkDistribution w = work_distribution(t, p, c.n_sites);
  if (str(cfg, "format", "csv") == "golden") {
    const std::vector<double> u = u_grid(cfg);
    const CfwCurve g = cfw_ed(t, p, c.n_sites, u);
    io::GoldenRecord r{c.n_sites, p.delta_f, p.tau_q, p.beta, ttm_cumulants(w, int(num(cfg, "n_max", 3))).kappa, g.u, g.g};
    out << io::to_json(r).dump(2) << '\n';
  } else {
    io::write_work_csv(out, w);
  }
  return ok;
}

int cmd_oracle(const json& cfg, std::ostream& out, std::ostream& report) {
  QuenchProtocol p = protocol(json{{"J", num(cfg, "J", 1.0)}, {"delta_f", num(cfg, "delta_f", 0.1)},
                                   {"tau_q", num(cfg, "tau_q", 3.0)}});
  const auto list = [&](const char* key, std::vector<double> def) {
    return cfg.contains(key) ? cfg.at(key).get<std::vector<double>>() : def;
  };
  const std::vector<double> qs = list("q", {0.5, 1.0, 2.0});
  const std::vector<double> us = list("u", {-1.3, 0.0, 0.7});
  const std::vector<double> betas = cfg.contains("beta") && !cfg.at("beta").is_array()
                                        ? std::vector<double>{num(cfg, "beta", 1.0)}
                                        : list("beta", {2.0, 4.0, 8.0});
  const int n_max = int(num(cfg, "n_max", 32));
  const double tol = num(cfg, "tol", 1e-6);
  const double v = luttinger_params(p.delta_f, p.J).v;

  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (double q : qs) {
    const ModeSolution m = solve_mode(q, p);
    const PairOracle oracle(p.J * q, v * q, m.y1, m.y2, n_max);
    for (double b : betas)
      for (double u : us) {
        const cplx o = oracle(u, b);
        const cplx f = pair_factor(u, v * q, p.J * q, m.Q, b);
        const double dev = std::abs(o - f) / std::abs(f);
        worst = std::max(worst, dev);
        rows.push_back({q, u, b, o.real(), o.imag(), f.real(), f.imag(), dev});
      }
  }
  io::write_csv(out, {"q", "u", "beta", "re_oracle", "im_oracle", "re_formula", "im_formula", "rel_dev"}, rows);
  report << "max_rel_dev=" << io::format_double(worst) << " tol=" << io::format_double(tol) << '\n';
  return worst <= tol ? ok : numerical;
}

}  // namespace kzwork::cli
