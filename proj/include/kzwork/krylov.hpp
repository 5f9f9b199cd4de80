#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kzwork {

using MatVec = std::function<void(std::span<const std::complex<double>>, std::span<std::complex<double>>)>;

struct KrylovOptions {
  double tol = 1e-14;          // absolute error of the result for unit input
  std::size_t max_dim = 40;    // Krylov dimension before the time step is split
};

// psi <- exp(-i t H) psi for Hermitian H given by `apply`. Returns the number of
// matrix-vector products used.
std::size_t expm_krylov(const MatVec& apply, double t, std::span<std::complex<double>> psi,
                        const KrylovOptions& opt = {});

struct LanczosResult {
  double value;
  std::vector<std::complex<double>> vector;
  double residual;
};

// Lowest eigenpair of Hermitian H from `start` (which fixes the symmetry sector
// explored). Restarted with full reorthogonalization until the residual is below tol.
LanczosResult lanczos_ground(const MatVec& apply, std::vector<std::complex<double>> start, double tol,
                             std::size_t max_dim = 120, std::size_t max_restarts = 50);

}  // namespace kzwork
