#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kzwork {

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  std::size_t max_panels = 200'000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b], starting from `initial_panels`
// equal panels. Throws QuadratureError when the panel budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {},
                     std::size_t initial_panels = 1);

// Vector-valued variant: f(x, out) fills `dim` complex values. All components
// share one panel set, refined until each meets its tolerance. Sharing nodes keeps
// the result a smooth function of any parameter the components depend on.
struct VecQuadResult {
  std::vector<std::complex<double>> value;
  std::vector<double> error;
  std::size_t panels = 0;
};
VecQuadResult integrate_vec(const std::function<void(double, std::span<std::complex<double>>)>& f,
                            std::size_t dim, std::span<const double> breakpoints, const QuadOptions& opt = {});

}  // namespace kzwork
