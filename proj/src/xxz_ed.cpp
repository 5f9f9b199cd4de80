#include "kzwork/xxz_ed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "kzwork/errors.hpp"
#include "kzwork/krylov.hpp"

namespace kzwork {
namespace {

constexpr double kPi = std::numbers::pi;

MatVec matvec(const SectorStructure& s, double J, double delta) {
  const kernels::XxzView v = s.view(J);
  return [v, delta](std::span<const cplx> x, std::span<cplx> y) { kernels::xxz_apply(v, delta, x, y); };
}

// Largest-magnitude component made real positive.
void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx c = v(imax);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

Eigen::VectorXcd translate(const SectorStructure& s, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(s.translate(std::int32_t(i))) = x(i);
  return y;
}

double momentum_of(const SectorStructure& s, const Eigen::VectorXcd& psi) {
  if (!s.spec.pbc) return 0.0;
  return std::arg(psi.dot(translate(s, psi)));
}

// Orders momenta: smaller |k| first, then k >= 0.
bool momentum_before(double a, double b) {
  const double tol = 1e-9;
  if (std::abs(std::abs(a) - std::abs(b)) > tol) return std::abs(a) < std::abs(b);
  return a > b + tol;
}

Eigen::VectorXcd start_vector(std::size_t dim) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(Eigen::Index(i)) = cplx(1.0 + 0.5 * std::sin(1.7 * double(i) + 0.3), 0.0);
  return v.normalized();
}

GroundState dense_ground(const SpinOperator& H) {
  const SectorStructure& s = *H.sector;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
  if (es.info() != Eigen::Success) throw ConvergenceError("ground_state: dense eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = 1e-9 * std::max(1.0, H.norm_bound());
  Eigen::Index deg = 1;
  while (deg < ev.size() && ev(deg) - ev(0) < tol) ++deg;

  GroundState g;
  g.energy = ev(0);
  g.degeneracy = std::size_t(deg);
  if (deg == 1 || !s.spec.pbc) {
    g.state = es.eigenvectors().col(0).cast<cplx>();
  } else {
    const Eigen::MatrixXcd V = es.eigenvectors().leftCols(deg).cast<cplx>();
    Eigen::MatrixXcd TV(V.rows(), deg);
    for (Eigen::Index c = 0; c < deg; ++c) TV.col(c) = translate(s, V.col(c));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ts(V.adjoint() * TV);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < deg; ++c)
      if (momentum_before(std::arg(ts.eigenvalues()(c)), std::arg(ts.eigenvalues()(best)))) best = c;
    g.state = (V * ts.eigenvectors().col(best)).normalized();
  }
  fix_phase(g.state);
  g.momentum = momentum_of(s, g.state);
  return g;
}

GroundState lanczos_ground_state(const SpinOperator& H) {
  const SectorStructure& s = *H.sector;
  const std::size_t dim = H.dim();
  const double tol = 1e-11 * H.norm_bound();
  const MatVec h = matvec(s, H.J, H.delta);
  const int nk = s.spec.pbc ? s.spec.n_sites : 1;
  GroundState best;
  bool have = false;
  for (int m = 0; m < nk; ++m) {
    const double k = s.spec.pbc ? 2.0 * kPi * double(m - (m > nk / 2 ? nk : 0)) / double(nk) : 0.0;
    // Projector onto T = e^{ik}.
    auto project = [&](Eigen::VectorXcd x) {
      if (!s.spec.pbc) return x;
      Eigen::VectorXcd acc = x, cur = x;
      for (int r = 1; r < nk; ++r) {
        cur = translate(s, cur);
        acc += std::exp(cplx(0.0, -k * r)) * cur;
      }
      return Eigen::VectorXcd(acc / double(nk));
    };
    Eigen::VectorXcd v0 = project(start_vector(dim));
    if (v0.norm() < 1e-8) continue;
    v0.normalize();
    MatVec hk = [&](std::span<const cplx> x, std::span<cplx> y) {
      h(x, y);
      if (s.spec.pbc) {
        Eigen::Map<Eigen::VectorXcd> ym(y.data(), Eigen::Index(y.size()));
        ym = project(ym);
      }
    };
    LanczosResult r = lanczos_ground(hk, std::vector<cplx>(v0.data(), v0.data() + v0.size()), tol);
    const bool tie = have && std::abs(r.value - best.energy) < 1e-9 * std::max(1.0, H.norm_bound());
    if (!have || (!tie && r.value < best.energy) || (tie && momentum_before(k, best.momentum))) {
      const std::size_t prev_deg = tie ? best.degeneracy : 0;
      best.energy = r.value;
      best.state = Eigen::Map<Eigen::VectorXcd>(r.vector.data(), Eigen::Index(r.vector.size()));
      best.momentum = k;
      best.degeneracy = prev_deg + 1;
      have = true;
    } else if (tie) {
      ++best.degeneracy;
    }
  }
  if (!have) throw ConvergenceError("ground_state: no momentum sector produced a start vector");
  best.state.normalize();
  fix_phase(best.state);
  return best;
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites > 14) throw DomainError("ChainSpec: N must lie in [2, 14]");
  if (pbc && n_sites == 2) throw DomainError("ChainSpec: N = 2 with periodic boundaries duplicates the bond");
  if (std::abs(two_sz) > n_sites || (n_sites + two_sz) % 2 != 0)
    throw DomainError("ChainSpec: magnetization sector incompatible with N");
}

kernels::XxzView SectorStructure::view(double J) const {
  return kernels::XxzView{row_ptr, col, zz, 0.5, J};
}

std::int32_t SectorStructure::translate(std::int32_t i) const {
  const int n = spec.n_sites;
  const std::uint32_t mask = (1u << n) - 1u;
  const std::uint32_t s = states[std::size_t(i)];
  return index[((s << 1) | (s >> (n - 1))) & mask];
}

std::shared_ptr<const SectorStructure> build_sector(const ChainSpec& spec) {
  spec.validate();
  auto s = std::make_shared<SectorStructure>();
  s->spec = spec;
  const int n = spec.n_sites;
  const std::uint32_t full = 1u << n;
  s->index.assign(full, -1);
  for (std::uint32_t b = 0; b < full; ++b)
    if (std::popcount(b) == spec.n_up()) {
      s->index[b] = std::int32_t(s->states.size());
      s->states.push_back(b);
    }
  const int bonds = spec.pbc ? n : n - 1;
  s->row_ptr.push_back(0);
  for (std::uint32_t b : s->states) {
    double zz = 0.0;
    std::vector<std::int32_t> cols;
    for (int j = 0; j < bonds; ++j) {
      const int k = (j + 1) % n;
      const bool sj = (b >> j) & 1u, sk = (b >> k) & 1u;
      zz += (sj == sk) ? 0.25 : -0.25;
      if (sj != sk) cols.push_back(s->index[b ^ ((1u << j) | (1u << k))]);
    }
    std::sort(cols.begin(), cols.end());
    s->col.insert(s->col.end(), cols.begin(), cols.end());
    s->row_ptr.push_back(std::int32_t(s->col.size()));
    s->zz.push_back(zz);
  }
  return s;
}

void SpinOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  kernels::xxz_apply(sector->view(J), delta, x, y);
}

Eigen::MatrixXd SpinOperator::dense() const {
  const auto& s = *sector;
  const Eigen::Index n = Eigen::Index(dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = J * delta * s.zz[std::size_t(i)];
    for (std::int32_t k = s.row_ptr[std::size_t(i)]; k < s.row_ptr[std::size_t(i) + 1]; ++k)
      h(i, s.col[std::size_t(k)]) += 0.5 * J;
  }
  return h;
}

double SpinOperator::norm_bound() const {
  const auto& s = *sector;
  double b = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    b = std::max(b, 0.5 * double(s.row_ptr[i + 1] - s.row_ptr[i]) + std::abs(delta * s.zz[i]));
  return J * b;
}

SpinOperator build_hamiltonian(const ChainSpec& spec, double delta, double J) {
  if (!(J > 0.0) || !std::isfinite(delta)) throw DomainError("build_hamiltonian: need J > 0 and finite delta");
  return SpinOperator{build_sector(spec), J, delta};
}

GroundState ground_state(const SpinOperator& H, std::size_t dense_limit) {
  GroundState g = H.dim() <= dense_limit ? dense_ground(H) : lanczos_ground_state(H);
  Eigen::VectorXcd r(g.state.size());
  H.apply(std::span<const cplx>(g.state.data(), std::size_t(g.state.size())),
          std::span<cplx>(r.data(), std::size_t(r.size())));
  g.residual = (r - g.energy * g.state).norm();
  if (g.residual > 1e-10 * std::max(1.0, H.norm_bound()))
    throw ConvergenceError("ground_state: residual " + std::to_string(g.residual) + " above tolerance");
  return g;
}

namespace {

// Fourth-order commutator-free Magnus step built from two half-weight exponentials.
// H is linear in Delta, so each exponent is H at an effective anisotropy.
constexpr double kC1 = 0.5 - 0.28867513459481287;  // 1/2 - sqrt(3)/6
constexpr double kC2 = 0.5 + 0.28867513459481287;
constexpr double kA1 = (3.0 - 2.0 * 1.7320508075688772) / 12.0;
constexpr double kA2 = (3.0 + 2.0 * 1.7320508075688772) / 12.0;

void propagate(const SectorStructure& s, const QuenchProtocol& p, Stepper stepper, std::size_t steps,
               double krylov_tol, Eigen::MatrixXcd& psi) {
  const double h = p.tau_q / double(steps);
  const KrylovOptions ko{krylov_tol, 40};
  auto expo = [&](double dt, double delta) {
    const MatVec mv = matvec(s, p.J, delta);
    for (Eigen::Index c = 0; c < psi.cols(); ++c)
      expm_krylov(mv, dt, std::span<cplx>(psi.col(c).data(), std::size_t(psi.rows())), ko);
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = h * double(k);
    if (stepper == Stepper::midpoint) {
      expo(h, p.delta_at(t + 0.5 * h));
      continue;
    }
    const double d1 = p.delta_at(t + kC1 * h), d2 = p.delta_at(t + kC2 * h);
    expo(0.5 * h, 2.0 * (kA2 * d1 + kA1 * d2));
    expo(0.5 * h, 2.0 * (kA1 * d1 + kA2 * d2));
  }
}

struct BlockResult {
  Eigen::MatrixXcd psi;
  std::size_t steps = 1;
  double change = 0.0;
};

// Evolves every column; the step count doubles until no column moves by tol.
BlockResult evolve_block(const SectorStructure& s, const QuenchProtocol& p, const Eigen::MatrixXcd& psi0,
                         const EvolveOptions& o) {
  BlockResult r{psi0};
  if (p.tau_q == 0.0) return r;
  if (p.delta_f == 0.0) {
    // Time-independent H: one exponential is exact.
    propagate(s, p, Stepper::midpoint, 1, o.krylov_tol, r.psi);
    return r;
  }
  std::size_t n = std::max<std::size_t>(1, o.steps);
  propagate(s, p, o.stepper, n, o.krylov_tol, r.psi);
  for (;;) {
    if (2 * n > o.max_steps)
      throw StepBudgetExceeded("evolve: step doubling did not converge within " + std::to_string(o.max_steps) +
                               " steps");
    Eigen::MatrixXcd fine = psi0;
    propagate(s, p, o.stepper, 2 * n, o.krylov_tol, fine);
    double change = 0.0;
    for (Eigen::Index c = 0; c < fine.cols(); ++c) change = std::max(change, (fine.col(c) - r.psi.col(c)).norm());
    n *= 2;
    r.psi = std::move(fine);
    r.steps = n;
    r.change = change;
    if (change < o.tol) return r;
  }
}

}  // namespace

EvolveResult evolve(const ChainSpec& spec, const QuenchProtocol& p, const Eigen::VectorXcd& psi0,
                    const EvolveOptions& opts) {
  p.validate();
  if (opts.steps < 1) throw DomainError("evolve: steps must be >= 1");
  auto s = build_sector(spec);
  if (std::size_t(psi0.size()) != s->dim()) throw DomainError("evolve: initial state has the wrong dimension");
  BlockResult b = evolve_block(*s, p, Eigen::MatrixXcd(psi0), opts);
  return EvolveResult{b.psi.col(0), b.steps, b.change};
}

EvolveResult evolve(const ChainSpec& spec, const QuenchProtocol& p, const EvolveOptions& opts) {
  const GroundState g = ground_state(build_hamiltonian(spec, 0.0, p.J));
  return evolve(spec, p, g.state, opts);
}

Transitions ttm_transitions(const ChainSpec& spec, const QuenchProtocol& p, const EdOptions& opts) {
  p.validate();
  if (spec.n_sites > 12) throw DomainError("ttm_transitions: full spectra need N <= 12");
  const SpinOperator h0 = build_hamiltonian(spec, 0.0, p.J);
  const SpinOperator ht{h0.sector, p.J, p.delta_f};
  const auto& s = *h0.sector;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_t(ht.dense());
  if (es_t.info() != Eigen::Success) throw ConvergenceError("ttm_transitions: eigensolver failed");
  const Eigen::VectorXd& et = es_t.eigenvalues();
  const Eigen::MatrixXcd vt = es_t.eigenvectors().cast<cplx>();

  Transitions t;
  t.etau_ground = et(0);
  auto record = [&](const Eigen::MatrixXcd& evolved, const std::vector<double>& e0, const std::vector<double>& rho) {
    const Eigen::MatrixXcd amp = vt.adjoint() * evolved;
    for (Eigen::Index m = 0; m < amp.cols(); ++m)
      for (Eigen::Index n = 0; n < amp.rows(); ++n) {
        t.work.push_back(et(n) - e0[std::size_t(m)]);
        t.weight.push_back(rho[std::size_t(m)] * std::norm(amp(n, m)));
      }
  };

  if (p.is_ground()) {
    const GroundState g = ground_state(h0);
    t.e0_ground = g.energy;
    record(evolve_block(s, p, Eigen::MatrixXcd(g.state), opts.evolve).psi, {g.energy}, {1.0});
    return t;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_0(h0.dense());
  if (es_0.info() != Eigen::Success) throw ConvergenceError("ttm_transitions: eigensolver failed");
  const Eigen::VectorXd& e0 = es_0.eigenvalues();
  t.e0_ground = e0(0);
  double z0 = 0.0, zt = 0.0;
  for (Eigen::Index i = 0; i < e0.size(); ++i) z0 += std::exp(-p.beta * (e0(i) - e0(0)));
  for (Eigen::Index i = 0; i < et.size(); ++i) zt += std::exp(-p.beta * (et(i) - et(0)));
  t.z_ratio = std::exp(-p.beta * (et(0) - e0(0))) * zt / z0;

  std::vector<Eigen::Index> keep;
  std::vector<double> e_keep, rho_keep;
  for (Eigen::Index m = 0; m < e0.size(); ++m) {
    const double rho = std::exp(-p.beta * (e0(m) - e0(0))) / z0;
    if (rho <= opts.rho_cutoff) continue;
    keep.push_back(m);
    e_keep.push_back(e0(m));
    rho_keep.push_back(rho);
  }
  Eigen::MatrixXcd cols(e0.size(), Eigen::Index(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) cols.col(Eigen::Index(c)) = es_0.eigenvectors().col(keep[c]).cast<cplx>();
  record(evolve_block(s, p, cols, opts.evolve).psi, e_keep, rho_keep);
  return t;
}

WorkDistribution work_distribution(const Transitions& t, const QuenchProtocol& p, int n_sites, double merge_tol,
                                   double drop_below) {
  std::vector<std::size_t> order(t.work.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.work[a] < t.work[b]; });
  WorkDistribution w;
  w.protocol = p;
  w.n_sites = n_sites;
  const double tol = merge_tol * p.J;
  double start = 0.0, sw = 0.0, swx = 0.0;
  bool open = false;
  auto flush = [&] {
    if (open && sw > drop_below) w.entries.emplace_back(swx / sw, sw);
  };
  for (std::size_t i : order) {
    const double x = t.work[i], wt = t.weight[i];
    if (!open || x - start > tol) {
      flush();
      start = x;
      sw = swx = 0.0;
      open = true;
    }
    sw += wt;
    swx += wt * x;
  }
  flush();
  return w;
}

WorkDistribution work_distribution(const ChainSpec& spec, const QuenchProtocol& p, const EdOptions& opts) {
  return work_distribution(ttm_transitions(spec, p, opts), p, spec.n_sites);
}

CfwCurve cfw_ed(const Transitions& t, const QuenchProtocol& p, int n_sites, std::span<const double> u) {
  CfwCurve c;
  c.u.assign(u.begin(), u.end());
  c.source = CfwSource::ed;
  c.meta.protocol = p;
  c.meta.n_sites = n_sites;
  c.meta.modes = ModeSet::discrete;
  c.g.reserve(u.size());
  for (double x : u) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < t.work.size(); ++i) acc += t.weight[i] * std::exp(cplx(0.0, x * t.work[i]));
    c.g.push_back(acc);
  }
  return c;
}

CfwCurve cfw_ed(const ChainSpec& spec, const QuenchProtocol& p, std::span<const double> u, const EdOptions& opts) {
  return cfw_ed(ttm_transitions(spec, p, opts), p, spec.n_sites, u);
}

CumulantSet ttm_cumulants(const WorkDistribution& w, int n_max) {
  if (n_max < 1 || n_max > 4) throw DomainError("ttm_cumulants: n_max must lie in [1, 4]");
  double z = 0.0, mean = 0.0;
  for (const auto& [x, pr] : w.entries) {
    z += pr;
    mean += pr * x;
  }
  mean /= z;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const auto& [x, pr] : w.entries) {
    const double d = x - mean;
    m2 += pr * d * d;
    m3 += pr * d * d * d;
    m4 += pr * d * d * d * d;
  }
  m2 /= z;
  m3 /= z;
  m4 /= z;
  const double all[4] = {mean, m2, m3, m4 - 3.0 * m2 * m2};
  CumulantSet c;
  c.kappa.assign(all, all + n_max);
  c.method = CumulantMethod::ttm_moments;
  c.n_max = n_max;
  return c;
}

}  // namespace kzwork
