#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kzwork/kernels.hpp"
#include "kzwork/protocol.hpp"
#include "kzwork/workstats.hpp"

namespace kzwork {

using cplx = std::complex<double>;

struct ChainSpec {
  int n_sites = 12;
  bool pbc = true;
  int two_sz = 0;  // 2 * total S^z of the sector

  // Throws DomainError: N outside [2, 14], N = 2 with PBC, sector parity mismatch.
  void validate() const;
  int n_up() const { return (n_sites + two_sz) / 2; }
};

// Sector basis and sparsity pattern, shared by every Delta.
struct SectorStructure {
  ChainSpec spec;
  std::vector<std::uint32_t> states;  // ascending bit configurations, bit j = site j up
  std::vector<std::int32_t> index;    // 2^N lookup, -1 outside the sector
  std::vector<std::int32_t> row_ptr, col;
  std::vector<double> zz;  // sum_j S^z_j S^z_{j+1}

  std::size_t dim() const { return states.size(); }
  kernels::XxzView view(double J) const;
  // Cyclic shift by one site (PBC only): T |s_0 ... s_{N-1}> = |s_{N-1} s_0 ...>.
  std::int32_t translate(std::int32_t i) const;
};

std::shared_ptr<const SectorStructure> build_sector(const ChainSpec& spec);

// H = J sum_j [S^x S^x + S^y S^y + Delta S^z S^z] restricted to the sector.
struct SpinOperator {
  std::shared_ptr<const SectorStructure> sector;
  double J = 1.0;
  double delta = 0.0;

  std::size_t dim() const { return sector->dim(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Eigen::MatrixXd dense() const;
  double norm_bound() const;  // cheap upper bound on ||H||
};

SpinOperator build_hamiltonian(const ChainSpec& spec, double delta, double J = 1.0);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd state;
  double momentum = 0.0;  // translation eigenvalue e^{ik}, k in (-pi, pi] (PBC)
  std::size_t degeneracy = 1;
  double residual = 0.0;
};

// Lowest eigenpair in the sector. Degenerate levels are resolved by translation
// eigenvalue: smallest |k|, then k >= 0. Dense for dim <= dense_limit, otherwise
// Lanczos in each momentum sector.
GroundState ground_state(const SpinOperator& H, std::size_t dense_limit = 1024);

enum class Stepper {
  magnus4,   // fourth-order commutator-free Magnus, two exponentials per step
  midpoint,  // exp(-i H(t + dt/2) dt)
};

struct EvolveOptions {
  std::size_t steps = 1;         // initial step count
  double tol = 1e-8;             // step-doubling acceptance on ||psi_2s - psi_s||
  std::size_t max_steps = 1u << 20;
  Stepper stepper = Stepper::magnus4;
  double krylov_tol = 1e-14;
};

struct EvolveResult {
  Eigen::VectorXcd state;
  std::size_t steps = 0;
  double change = 0.0;  // last step-doubling difference
};

// psi(tau_q) under H(t) = H(Delta(t)); throws StepBudgetExceeded.
EvolveResult evolve(const ChainSpec& spec, const QuenchProtocol& p, const Eigen::VectorXcd& psi0,
                    const EvolveOptions& opts = {});
// Same, starting from the ground state of H(0).
EvolveResult evolve(const ChainSpec& spec, const QuenchProtocol& p, const EvolveOptions& opts = {});

// Raw two-time-measurement data: one entry per (m, n) with weight rho_m |<n|U|m>|^2.
struct Transitions {
  std::vector<double> work;
  std::vector<double> weight;
  double e0_ground = 0.0, etau_ground = 0.0;
  double z_ratio = 1.0;  // sector Z_tau / Z_0 (thermal runs)
};

struct EdOptions {
  EvolveOptions evolve;
  double rho_cutoff = 0.0;  // skip initial states with rho_m below this
};

// Full spectra of H(0) and H(Delta_f) (N <= 12); rho from beta in the protocol.
Transitions ttm_transitions(const ChainSpec& spec, const QuenchProtocol& p, const EdOptions& opts = {});

struct WorkDistribution {
  std::vector<std::pair<double, double>> entries;  // (W, P), sorted by W
  QuenchProtocol protocol;
  int n_sites = 0;
};

// Atoms closer than merge_tol * J are merged at their weighted mean; weights below
// drop_below are discarded.
WorkDistribution work_distribution(const Transitions& t, const QuenchProtocol& p, int n_sites,
                                   double merge_tol = 1e-10, double drop_below = 1e-16);
WorkDistribution work_distribution(const ChainSpec& spec, const QuenchProtocol& p, const EdOptions& opts = {});

// G(u) = sum weight e^{iuW} over the raw transitions.
CfwCurve cfw_ed(const Transitions& t, const QuenchProtocol& p, int n_sites, std::span<const double> u);
CfwCurve cfw_ed(const ChainSpec& spec, const QuenchProtocol& p, std::span<const double> u,
                const EdOptions& opts = {});

// Cumulants kappa_1..kappa_n_max (n_max <= 4) from moments of P(W).
CumulantSet ttm_cumulants(const WorkDistribution& w, int n_max);

}  // namespace kzwork
