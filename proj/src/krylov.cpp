#include "kzwork/krylov.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kzwork/errors.hpp"
#include "kzwork/kernels.hpp"

namespace kzwork {
namespace {

using cplx = std::complex<double>;

// Lanczos basis with full reorthogonalization; stops early on an invariant subspace.
struct Tridiag {
  std::vector<std::vector<cplx>> v;
  std::vector<double> a, b;  // diagonal, off-diagonal (b[j] couples j and j+1)
};

void extend(const MatVec& apply, Tridiag& t, std::vector<cplx>& w) {
  const std::size_t j = t.v.size() - 1;
  const auto& vj = t.v[j];
  apply(vj, w);
  const double aj = kernels::dotc(vj, w).real();
  kernels::axpy(-aj, vj, w);
  if (j > 0) kernels::axpy(-t.b[j - 1], t.v[j - 1], w);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& vi : t.v) kernels::axpy(-kernels::dotc(vi, w), vi, w);
  t.a.push_back(aj);
  t.b.push_back(std::sqrt(kernels::norm2(w)));
}

}  // namespace

std::size_t expm_krylov(const MatVec& apply, double t, std::span<cplx> psi, const KrylovOptions& opt) {
  const std::size_t n = psi.size();
  const double beta = std::sqrt(kernels::norm2(psi));
  if (beta == 0.0 || t == 0.0) return 0;
  Tridiag td;
  td.v.emplace_back(psi.begin(), psi.end());
  kernels::scale(1.0 / beta, td.v[0]);
  std::vector<cplx> w(n);
  std::size_t mv = 0;
  Eigen::VectorXcd coef;
  for (std::size_t m = 1;; ++m) {
    extend(apply, td, w);
    ++mv;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
    for (std::size_t i = 0; i < m; ++i) {
      T(Eigen::Index(i), Eigen::Index(i)) = td.a[i];
      if (i + 1 < m) T(Eigen::Index(i), Eigen::Index(i + 1)) = T(Eigen::Index(i + 1), Eigen::Index(i)) = td.b[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();
    Eigen::VectorXcd ph(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) ph(k) = std::exp(cplx(0.0, -t * ev(k))) * U(0, k);
    coef = U.cast<cplx>() * ph;
    const double bm = td.b[m - 1];
    const double err = bm * std::abs(coef(Eigen::Index(m - 1)));
    const bool invariant = bm < 1e-13 * (std::abs(td.a[0]) + 1.0);
    if (err < opt.tol || invariant) break;
    if (m >= opt.max_dim || m >= n) {
      // split the step; error estimate did not converge at this dimension
      if (m >= n) break;
      mv += expm_krylov(apply, 0.5 * t, psi, opt);
      mv += expm_krylov(apply, 0.5 * t, psi, opt);
      return mv;
    }
    td.v.emplace_back(w);
    kernels::scale(1.0 / bm, td.v.back());
  }
  std::fill(psi.begin(), psi.end(), cplx(0.0));
  for (Eigen::Index k = 0; k < coef.size(); ++k) kernels::axpy(beta * coef(k), td.v[std::size_t(k)], psi);
  return mv;
}

LanczosResult lanczos_ground(const MatVec& apply, std::vector<cplx> start, double tol, std::size_t max_dim,
                             std::size_t max_restarts) {
  const std::size_t n = start.size();
  std::vector<cplx> w(n), hv(n);
  for (std::size_t restart = 0; restart <= max_restarts; ++restart) {
    const double nrm = std::sqrt(kernels::norm2(start));
    if (nrm == 0.0) throw DomainError("lanczos_ground: zero start vector");
    Tridiag td;
    td.v.push_back(start);
    kernels::scale(1.0 / nrm, td.v[0]);
    Eigen::VectorXd ritz;
    for (std::size_t m = 1; m <= std::min(max_dim, n); ++m) {
      extend(apply, td, w);
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
      for (std::size_t i = 0; i < m; ++i) {
        T(Eigen::Index(i), Eigen::Index(i)) = td.a[i];
        if (i + 1 < m) T(Eigen::Index(i), Eigen::Index(i + 1)) = T(Eigen::Index(i + 1), Eigen::Index(i)) = td.b[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      ritz = es.eigenvectors().col(0);
      const double bm = td.b[m - 1];
      if (bm * std::abs(ritz(Eigen::Index(m - 1))) < 0.1 * tol || bm < 1e-14 || m == std::min(max_dim, n)) break;
      td.v.push_back(w);
      kernels::scale(1.0 / bm, td.v.back());
    }
    std::vector<cplx> x(n, 0.0);
    for (Eigen::Index k = 0; k < ritz.size(); ++k) kernels::axpy(ritz(k), td.v[std::size_t(k)], x);
    kernels::scale(1.0 / std::sqrt(kernels::norm2(x)), x);
    apply(x, hv);
    const double e = kernels::dotc(x, hv).real();
    kernels::axpy(-e, x, hv);
    const double res = std::sqrt(kernels::norm2(hv));
    if (res <= tol) return {e, x, res};
    start = x;
  }
  throw ConvergenceError("lanczos_ground: no convergence within the restart budget");
}

}  // namespace kzwork
