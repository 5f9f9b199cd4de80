#pragma once

// Brute-force checks in a truncated two-mode bosonic Fock space.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kzwork/luttinger.hpp"
#include "kzwork/protocol.hpp"

namespace kzwork {

struct FockSpace {
  int n_modes = 2;
  int n_max = 8;  // per-mode occupation cutoff
  std::vector<Eigen::MatrixXcd> a;  // annihilators, one per mode

  FockSpace(int n_modes, int n_max);
  Eigen::Index dim() const { return a.empty() ? 0 : a[0].rows(); }
  Eigen::MatrixXcd number(int mode) const { return a[std::size_t(mode)].adjoint() * a[std::size_t(mode)]; }
};

// The R/L pair of one momentum.
struct TwoModeFockSpace : FockSpace {
  explicit TwoModeFockSpace(int n_max) : FockSpace(2, n_max) {}
};

// Per-pair CFW factor Tr(e^{iu H^H} e^{-i(u - i beta) H0}) / Tr(e^{-beta H0}) with
//   H0  = eps0 (n1 + n2 + 1)
//   H^H = eps_tau (d1^H+ d1^H + d2^H+ d2^H + 1),  d1^H = y1 d1 + y2* d2+, d2^H = y1 d2 + y2* d1+.
// H^H conserves n1 - n2, so it is diagonalized block by block, once; evaluation is
// cheap per (u, beta).
class PairOracle {
 public:
  // Throws ConstraintViolation when ||y1|^2 - |y2|^2 - 1| > 1e-8.
  PairOracle(double eps0, double eps_tau, cplx y1, cplx y2, int n_max);

  // Throws DomainError for beta <= 0 and TruncationError when the thermal
  // occupation tail e^{-beta eps0 (n_max + 1)} / (1 - e^{-beta eps0}) exceeds tail_tol.
  cplx operator()(double u, double beta, double tail_tol = kDefaultTailTol) const;
  static constexpr double kDefaultTailTol = 1e-7;
  int n_max() const { return n_max_; }

 private:
  double eps0_;
  int n_max_;
  struct Block {
    std::vector<Eigen::Index> basis;  // Fock indices with a fixed n1 - n2
    Eigen::VectorXd lambda;           // eigenvalues of H^H in the block
    Eigen::MatrixXd weight;           // |V_ik|^2
  };
  std::vector<Block> blocks_;
  Eigen::VectorXd n_total_;  // n1 + n2 per Fock basis state
};

// Oracle for mode q of protocol p using its solved Bogoliubov coefficients.
cplx gq_oracle(double q, const QuenchProtocol& p, const ModeSolution& mode, double u, int n_max,
               double tail_tol = PairOracle::kDefaultTailTol);

struct TraceCheck {
  cplx lhs;  // truncated trace of prod_i exp(1/2 d^T S_i d)
  cplx rhs;  // [(-1)^n det(prod_i exp(tau_B S_i) - 1)]^{-1/2}
  double max_jump = 0.0;  // largest relative change of rhs between homotopy nodes
};

// Each S is 2n x 2n complex symmetric in the ordering d = (a_1..a_n, a_1+..a_n+); the
// operator products are ordered left to right as listed. The square-root branch is
// tracked along lambda S for lambda in [lambda_0, 1] from the root with positive real part.
TraceCheck trace_formula_check(const std::vector<Eigen::MatrixXcd>& s_list, int n_modes, int n_max,
                               int homotopy_nodes = 400);

// S encoding c * eps (a_1+ a_1 + ... + a_n+ a_n + n/2) for a scalar c.
Eigen::MatrixXcd harmonic_form(int n_modes, cplx c_eps);
// S encoding c * H^H for a pair, with H^H as in PairOracle.
Eigen::MatrixXcd pair_form(cplx c_eps_tau, cplx y1, cplx y2);

}  // namespace kzwork
