#include "kzwork/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <cstdio>
#include <unsupported/Eigen/MatrixFunctions>

#include "kzwork/errors.hpp"

namespace kzwork {
namespace {

// Single-mode annihilator on {0..n_max} embedded in the n_modes tensor product,
// mode 0 being the slowest index.
Eigen::MatrixXcd embedded_annihilator(int n_modes, int n_max, int mode) {
  const Eigen::Index d1 = n_max + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d1, d1);
  for (Eigen::Index n = 1; n < d1; ++n) a(n - 1, n) = std::sqrt(double(n));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int m = 0; m < n_modes; ++m) {
    const Eigen::MatrixXcd f = m == mode ? a : Eigen::MatrixXcd::Identity(d1, d1);
    Eigen::MatrixXcd k(out.rows() * d1, out.cols() * d1);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) k.block(i * d1, j * d1, d1, d1) = out(i, j) * f;
    out = std::move(k);
  }
  return out;
}

bool is_diagonal(const Eigen::MatrixXcd& m) {
  return (m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

// exp(M) for M = c H with H Hermitian (the quadratic forms used here), falling
// back to Pade scaling and squaring otherwise.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
  if (is_diagonal(m)) return Eigen::MatrixXcd(m.diagonal().array().exp().matrix().asDiagonal());
  const Eigen::MatrixXcd a = 0.5 * (m + m.adjoint());
  const Eigen::MatrixXcd b = cplx(0.0, -0.5) * (m - m.adjoint());
  const double na = a.norm(), nb = b.norm();
  const Eigen::MatrixXcd& h = na >= nb ? a : b;
  const Eigen::MatrixXcd& o = na >= nb ? b : a;
  const double r = (h.adjoint() * o).trace().real() / h.squaredNorm();
  if ((o - r * h).norm() <= 1e-13 * m.norm()) {
    const cplx c = na >= nb ? cplx(1.0, r) : cplx(r, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd e = (c * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
  }
  return m.exp();
}

}  // namespace

FockSpace::FockSpace(int n_modes_, int n_max_) : n_modes(n_modes_), n_max(n_max_) {
  if (n_modes < 1 || n_modes > 2) throw DomainError("FockSpace: one or two modes supported");
  if (n_max < 1 || n_max > 64) throw DomainError("FockSpace: n_max must lie in [1, 64]");
  for (int m = 0; m < n_modes; ++m) a.push_back(embedded_annihilator(n_modes, n_max, m));
}

PairOracle::PairOracle(double eps0, double eps_tau, cplx y1, cplx y2, int n_max) : eps0_(eps0), n_max_(n_max) {
  if (!(eps0 > 0.0) || !(eps_tau > 0.0)) throw DomainError("PairOracle: mode energies must be positive");
  if (std::abs(std::norm(y1) - std::norm(y2) - 1.0) > 1e-8)
    throw ConstraintViolation("PairOracle: |y1|^2 - |y2|^2 != 1");
  // H^H = eps_tau [Q (n1 + n2 + 1) + 2 y1* y2* a1+ a2+ + 2 y1 y2 a1 a2]
  const Eigen::Index side = n_max + 1;
  const double Q = std::norm(y1) + std::norm(y2);
  const cplx up = 2.0 * eps_tau * std::conj(y1 * y2);
  n_total_.resize(side * side);
  for (Eigen::Index i = 0; i < side * side; ++i) n_total_(i) = double(i / side + i % side);
  for (Eigen::Index diff = -n_max; diff <= n_max; ++diff) {
    Block b;
    for (Eigen::Index i = 0; i < side * side; ++i)
      if (i / side - i % side == diff) b.basis.push_back(i);
    const Eigen::Index m = Eigen::Index(b.basis.size());
    // basis is ordered by n1, so consecutive entries differ by one pair
    Eigen::MatrixXcd sub = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const Eigen::Index i = b.basis[std::size_t(r)];
      sub(r, r) = eps_tau * Q * (n_total_(i) + 1.0);
      if (r + 1 < m) {
        const double n1 = double(i / side), n2 = double(i % side);
        sub(r + 1, r) = up * std::sqrt((n1 + 1.0) * (n2 + 1.0));
        sub(r, r + 1) = std::conj(sub(r + 1, r));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    if (es.info() != Eigen::Success) throw ConvergenceError("PairOracle: eigensolver failed");
    b.lambda = es.eigenvalues();
    b.weight = es.eigenvectors().cwiseAbs2();
    blocks_.push_back(std::move(b));
  }
}

cplx PairOracle::operator()(double u, double beta, double tail_tol) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("PairOracle: need finite beta > 0");
  const double x = beta * eps0_;
  const double tail = std::exp(-x * double(n_max_ + 1)) / -std::expm1(-x);
  if (tail > tail_tol) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "PairOracle: thermal occupation tail %.3g above %.3g at n_max = %d", tail, tail_tol,
                  n_max_);
    throw TruncationError(msg);
  }
  if (u == 0.0) return 1.0;
  // Both traces carry e^{-beta eps0}; it cancels.
  double z = 0.0;
  cplx num = 0.0;
  for (const Block& b : blocks_) {
    Eigen::VectorXcd rho(Eigen::Index(b.basis.size()));
    for (std::size_t r = 0; r < b.basis.size(); ++r) {
      const double n = n_total_(b.basis[r]);
      const double w = std::exp(-x * n);
      z += w;
      rho(Eigen::Index(r)) = w * std::exp(cplx(0.0, -u * eps0_ * (n + 1.0)));
    }
    const Eigen::VectorXcd proj = b.weight.transpose().cast<cplx>() * rho;
    for (Eigen::Index k = 0; k < b.lambda.size(); ++k) num += std::exp(cplx(0.0, u * b.lambda(k))) * proj(k);
  }
  return num / z;
}

cplx gq_oracle(double q, const QuenchProtocol& p, const ModeSolution& mode, double u, int n_max, double tail_tol) {
  p.validate();
  if (p.is_ground()) throw DomainError("gq_oracle: needs a finite beta");
  const double eps0 = luttinger_params(0.0, p.J).v * q;
  const double eps_t = luttinger_params(p.delta_f, p.J).v * q;
  return PairOracle(eps0, eps_t, mode.y1, mode.y2, n_max)(u, p.beta, tail_tol);
}

Eigen::MatrixXcd harmonic_form(int n_modes, cplx c_eps) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) s(i, n_modes + i) = s(n_modes + i, i) = c_eps;
  return s;
}

Eigen::MatrixXcd pair_form(cplx c_eps_tau, cplx y1, cplx y2) {
  // H^H / eps = Q/2 sum_i (a_i+ a_i + a_i a_i+) + 2 y1 y2 a1 a2 + 2 y1* y2* a1+ a2+
  const double Q = std::norm(y1) + std::norm(y2);
  Eigen::MatrixXcd s = harmonic_form(2, Q);
  s(0, 1) = s(1, 0) = 2.0 * y1 * y2;
  s(2, 3) = s(3, 2) = 2.0 * std::conj(y1 * y2);
  return c_eps_tau * s;
}

TraceCheck trace_formula_check(const std::vector<Eigen::MatrixXcd>& s_list, int n_modes, int n_max,
                               int homotopy_nodes) {
  if (s_list.empty()) throw DomainError("trace_formula_check: empty S list");
  if (homotopy_nodes < 2) throw DomainError("trace_formula_check: need at least two homotopy nodes");
  const Eigen::Index n2 = 2 * n_modes;
  for (const auto& s : s_list)
    if (s.rows() != n2 || s.cols() != n2 || (s - s.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1.0 + s.norm()))
      throw DomainError("trace_formula_check: each S must be symmetric of size 2n");

  const FockSpace f(n_modes, n_max);
  std::vector<Eigen::SparseMatrix<cplx>> d;
  for (int i = 0; i < n_modes; ++i) d.push_back(f.a[std::size_t(i)].sparseView());
  for (int i = 0; i < n_modes; ++i) d.push_back(Eigen::SparseMatrix<cplx>(f.a[std::size_t(i)].adjoint().sparseView()));
  Eigen::SparseMatrix<cplx> eye(f.dim(), f.dim());
  eye.setIdentity();

  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(f.dim(), f.dim());
  for (const auto& s : s_list) {
    Eigen::SparseMatrix<cplx> q(f.dim(), f.dim());
    for (Eigen::Index i = 0; i < n2; ++i)
      for (Eigen::Index j = 0; j < n2; ++j) {
        if (s(i, j) == 0.0) continue;
        // a_k a_k+ is normal ordered before truncation, so the cutoff does not
        // lower the top occupation's energy
        const bool anti = i < n_modes && j == i + n_modes;
        const Eigen::SparseMatrix<cplx> term =
            anti ? Eigen::SparseMatrix<cplx>(d[std::size_t(j)] * d[std::size_t(i)] + eye)
                 : Eigen::SparseMatrix<cplx>(d[std::size_t(i)] * d[std::size_t(j)]);
        q += 0.5 * s(i, j) * term;
      }
    prod = prod * expm(Eigen::MatrixXcd(q));
  }
  TraceCheck out;
  out.lhs = prod.trace();
  if (!std::isfinite(std::abs(out.lhs))) throw TruncationError("trace_formula_check: truncated trace diverges");

  Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(n2, n2);
  tau.topRightCorner(n_modes, n_modes).setIdentity();
  tau.bottomLeftCorner(n_modes, n_modes) = -Eigen::MatrixXcd::Identity(n_modes, n_modes);
  const double sign = n_modes % 2 == 0 ? 1.0 : -1.0;
  auto inv_sqrt_det = [&](double lambda) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n2, n2);
    for (const auto& s : s_list) m = m * Eigen::MatrixXcd((lambda * tau * s).exp());
    return 1.0 / std::sqrt(sign * (m - Eigen::MatrixXcd::Identity(n2, n2)).determinant());
  };
  // Geometric homotopy from lambda_0 = 1e-3, picking the root nearest the previous node.
  const double l0 = 1e-3;
  cplx prev = inv_sqrt_det(l0);
  if (prev.real() < 0.0) prev = -prev;
  for (int k = 1; k < homotopy_nodes; ++k) {
    const double lambda = l0 * std::pow(1.0 / l0, double(k) / double(homotopy_nodes - 1));
    cplx r = inv_sqrt_det(lambda);
    if (std::abs(r - prev) > std::abs(-r - prev)) r = -r;
    out.max_jump = std::max(out.max_jump, std::abs(r - prev) / std::max(std::abs(r), std::abs(prev)));
    prev = r;
  }
  out.rhs = prev;
  return out;
}

}  // namespace kzwork
