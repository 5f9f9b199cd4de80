#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kzwork/errors.hpp"
#include "kzwork/fock_oracle.hpp"
#include "kzwork/workstats.hpp"

using namespace kzwork;

namespace {

struct Pair {
  double q, eps0, eps_tau;
  ModeSolution m;
};

Pair mode(double q) {
  const auto p = QuenchProtocol::ground(1.0, 0.1, 3.0);
  return {q, q, luttinger_params(0.1).v * q, solve_mode(q, p)};
}

}  // namespace

TEST_CASE("Fock space operators") {
  const TwoModeFockSpace f(5);
  CHECK(f.dim() == 36);
  const Eigen::MatrixXcd comm = f.a[0] * f.a[1] - f.a[1] * f.a[0];
  CHECK(comm.norm() == 0.0);
  // [a, a+] = 1 away from the cutoff edge
  const Eigen::MatrixXcd c = f.a[0] * f.a[0].adjoint() - f.a[0].adjoint() * f.a[0];
  const Eigen::MatrixXcd n = f.number(0);
  for (Eigen::Index i = 0; i < f.dim(); ++i)
    if (n(i, i).real() < 5.0) CHECK(std::abs(c(i, i) - 1.0) <= 1e-14);
  CHECK_THROWS_AS(FockSpace(3, 4), DomainError);
}

TEST_CASE("oracle matches the closed-form pair factor") {
  for (double q : {0.5, 1.0, 2.0}) {
    const auto s = mode(q);
    const PairOracle o(s.eps0, s.eps_tau, s.m.y1, s.m.y2, 32);
    CHECK(o(0.0, 2.0) == cplx(1.0));
    for (double b : {2.0, 4.0, 8.0})
      for (double u : {-1.3, 0.7}) {
        const cplx f = pair_factor(u, s.eps_tau, s.eps0, s.m.Q, b);
        CHECK(std::abs(o(u, b) - f) <= 1e-6 * std::abs(f));
        CHECK(std::abs(gq_oracle(q, QuenchProtocol::thermal(1.0, 0.1, 3.0, b), s.m, u, 32) - o(u, b)) <= 1e-12);
      }
  }
}

TEST_CASE("without squeezing only the thermal phase average remains") {
  const PairOracle o(0.8, 1.1, 1.0, 0.0, 32);
  for (double u : {-2.0, 0.3, 1.5}) {
    const cplx g = o(u, 4.0);
    CHECK(std::abs(g) <= 1.0);
    CHECK(std::abs(g - pair_factor(u, 1.1, 0.8, 1.0, 4.0)) <= 1e-12);
  }
}

TEST_CASE("cutoff convergence") {
  const auto s = mode(0.5);
  const cplx exact = pair_factor(0.7, s.eps_tau, s.eps0, s.m.Q, 2.0);
  double prev = INFINITY;
  for (int n : {8, 16, 32}) {
    const PairOracle o(s.eps0, s.eps_tau, s.m.y1, s.m.y2, n);
    const double err = std::abs(o(0.7, 2.0, 1e-1) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-6);
  const PairOracle coarse(s.eps0, s.eps_tau, s.m.y1, s.m.y2, 4);
  CHECK_THROWS_AS(coarse(0.7, 2.0), TruncationError);
  CHECK_THROWS_AS(coarse(0.7, -1.0), DomainError);
}

TEST_CASE("constraint on the Bogoliubov coefficients") {
  CHECK_THROWS_AS(PairOracle(1.0, 1.0, 1.0, 0.1, 8), ConstraintViolation);
}

TEST_CASE("Gaussian trace formula") {
  SUBCASE("single thermal oscillator") {
    for (double b : {0.5, 2.0}) {
      const auto tc = trace_formula_check({harmonic_form(1, -b)}, 1, 64);
      const double z = 1.0 / (2.0 * std::sinh(b / 2.0));
      CHECK(std::abs(tc.rhs - z) <= 1e-10 * z);
      CHECK(std::abs(tc.lhs - tc.rhs) <= 1e-6 * z);
    }
  }
  SUBCASE("pair evolution against the thermal weight") {
    for (double q : {0.5, 1.0, 2.0}) {
      const auto s = mode(q);
      const double u = 0.5, b = 2.0;
      const auto tc = trace_formula_check(
          {pair_form(cplx(0.0, u * s.eps_tau), s.m.y1, s.m.y2), harmonic_form(2, -cplx(b, u) * s.eps0)}, 2, 24);
      CHECK(std::abs(tc.lhs - tc.rhs) <= 1e-6 * std::abs(tc.rhs));
      CHECK(tc.max_jump < 0.1);
    }
  }
  SUBCASE("quadratic forms are symmetric") {
    const auto s = mode(1.0);
    const Eigen::MatrixXcd S = pair_form(cplx(0.0, 0.3), s.m.y1, s.m.y2);
    CHECK((S - S.transpose()).norm() <= 1e-14);
    const Eigen::MatrixXcd H = harmonic_form(2, 0.7);
    CHECK((H - H.transpose()).norm() <= 1e-14);
  }
}
