#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "doctest.h"
#include "kzwork/errors.hpp"
#include "kzwork/io.hpp"
#include "kzwork/xxz_ed.hpp"

using namespace kzwork;
using std::numbers::pi;

namespace {

// Full 2^N Hamiltonian from Kronecker products, restricted to the sector basis.
Eigen::MatrixXd brute_force(const ChainSpec& c, double delta, double J, const SectorStructure& s) {
  const int n = c.n_sites;
  Eigen::Matrix2d sp, sm, sz, id = Eigen::Matrix2d::Identity();
  sp << 0, 0, 1, 0;  // basis (down, up): S+ |down> = |up>
  sm = sp.transpose();
  sz << -0.5, 0, 0, 0.5;
  auto site_op = [&](const Eigen::Matrix2d& a, int j) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) {
      Eigen::MatrixXd nm = Eigen::kroneckerProduct(m, k == j ? a : id);
      m = nm;
    }
    return m;
  };
  const Eigen::Index full = Eigen::Index(1) << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(full, full);
  for (int j = 0; j < (c.pbc ? n : n - 1); ++j) {
    const int k = (j + 1) % n;
    h += J * (0.5 * (site_op(sp, j) * site_op(sm, k) + site_op(sm, j) * site_op(sp, k)) +
              delta * site_op(sz, j) * site_op(sz, k));
  }
  Eigen::MatrixXd r(s.dim(), s.dim());
  for (std::size_t a = 0; a < s.dim(); ++a)
    for (std::size_t b = 0; b < s.dim(); ++b) r(Eigen::Index(a), Eigen::Index(b)) = h(s.states[a], s.states[b]);
  return r;
}

Eigen::VectorXcd random_state(std::size_t dim, int seed) {
  std::srand(unsigned(seed));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(Eigen::Index(dim));
  return v / v.norm();
}

std::vector<double> mirrored(double h, int n) {
  std::vector<double> u;
  for (int j = -n; j <= n; ++j) u.push_back(j * h);
  return u;
}

}  // namespace

TEST_CASE("chain validation") {
  CHECK_THROWS_AS((ChainSpec{2, true, 0}.validate()), DomainError);
  CHECK_THROWS_AS((ChainSpec{15, true, 0}.validate()), DomainError);
  CHECK_THROWS_AS((ChainSpec{8, true, 1}.validate()), DomainError);
  CHECK_NOTHROW((ChainSpec{2, false, 0}.validate()));
  CHECK_NOTHROW((ChainSpec{7, true, 1}.validate()));
}

TEST_CASE("sector structure") {
  const auto s = build_sector(ChainSpec{10, true, 0});
  CHECK(s->dim() == 252);
  CHECK(std::is_sorted(s->states.begin(), s->states.end()));
  for (std::size_t i = 0; i < s->dim(); ++i) {
    CHECK(std::popcount(s->states[i]) == 5);
    CHECK(s->index[s->states[i]] == std::int32_t(i));
    // N translations return to the start
    std::int32_t j = std::int32_t(i);
    for (int k = 0; k < 10; ++k) j = s->translate(j);
    CHECK(j == std::int32_t(i));
  }
  CHECK(build_sector(ChainSpec{9, false, 3})->dim() == 84);
}

TEST_CASE("small spectra") {
  SUBCASE("two open sites") {
    for (double d : {-0.5, 0.0, 0.7}) {
      const auto g = ground_state(build_hamiltonian(ChainSpec{2, false, 0}, d));
      CHECK(g.energy == doctest::Approx(-0.5 - d / 4.0).epsilon(1e-14));
    }
  }
  SUBCASE("four-site ring") {
    CHECK(ground_state(build_hamiltonian(ChainSpec{4, true, 0}, 0.0)).energy == doctest::Approx(-std::sqrt(2.0)));
    CHECK(ground_state(build_hamiltonian(ChainSpec{4, true, 0}, 1.0)).energy == doctest::Approx(-2.0));
  }
  SUBCASE("brute force") {
    for (auto c : {ChainSpec{4, true, 0}, ChainSpec{6, false, 2}, ChainSpec{7, true, -1}}) {
      const auto h = build_hamiltonian(c, 0.37, 1.3);
      const Eigen::MatrixXd d = h.dense();
      CHECK((d - d.transpose()).norm() == 0.0);
      CHECK((d - brute_force(c, 0.37, 1.3, *h.sector)).norm() <= 1e-13);
    }
  }
  SUBCASE("XX spectrum is symmetric under E -> -E") {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(ChainSpec{8, true, 0}, 0.0).dense());
    const Eigen::VectorXd e = es.eigenvalues();
    for (Eigen::Index i = 0; i < e.size(); ++i) CHECK(std::abs(e(i) + e(e.size() - 1 - i)) <= 1e-12);
  }
}

TEST_CASE("matvec agrees with the dense matrix") {
  const auto h = build_hamiltonian(ChainSpec{10, true, 0}, -0.4, 0.8);
  const Eigen::VectorXcd x = random_state(h.dim(), 3);
  Eigen::VectorXcd y(x.size());
  h.apply({x.data(), std::size_t(x.size())}, {y.data(), std::size_t(y.size())});
  CHECK((y - h.dense().cast<cplx>() * x).norm() <= 1e-13);
  CHECK(h.norm_bound() >= h.dense().operatorNorm() - 1e-12);
}

TEST_CASE("Lanczos ground states match dense diagonalization") {
  for (int n : {8, 10, 12}) {
    const auto h = build_hamiltonian(ChainSpec{n, true, 0}, 0.1);
    const auto dense = ground_state(h);
    const auto lan = ground_state(h, 1);
    CHECK(lan.energy == doctest::Approx(dense.energy).epsilon(1e-12));
    CHECK(std::abs(std::abs(dense.state.dot(lan.state)) - 1.0) <= 1e-8);
    CHECK(dense.residual <= 1e-10);
    CHECK(std::abs(dense.state.norm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("evolution") {
  const ChainSpec c{8, true, 0};
  SUBCASE("constant Hamiltonian leaves the ground state in place") {
    const auto r = evolve(c, QuenchProtocol::ground(1.0, 0.0, 3.0));
    const auto g = ground_state(build_hamiltonian(c, 0.0));
    CHECK(std::abs(std::abs(g.state.dot(r.state)) - 1.0) <= 1e-12);
  }
  SUBCASE("unitarity") {
    const Eigen::VectorXcd x = random_state(70, 5);
    const auto r = evolve(c, QuenchProtocol::ground(1.0, 0.6, 4.0), x);
    CHECK(std::abs(r.state.norm() - 1.0) <= 1e-12);
    CHECK(r.change < 1e-8);
  }
  SUBCASE("slow ramps are adiabatic") {
    const auto r = evolve(c, QuenchProtocol::ground(1.0, 0.1, 100.0));
    const auto g = ground_state(build_hamiltonian(c, 0.1));
    CHECK(std::norm(g.state.dot(r.state)) >= 0.999);
  }
  SUBCASE("step budget") {
    EvolveOptions o;
    o.max_steps = 4;
    o.tol = 1e-14;
    CHECK_THROWS_AS(evolve(c, QuenchProtocol::ground(1.0, 0.5, 10.0), o), StepBudgetExceeded);
  }
}

TEST_CASE("stepper orders") {
  const ChainSpec c{8, true, 0};
  const auto p = QuenchProtocol::ground(1.0, 0.5, 4.0);
  for (auto [st, ratio] : {std::pair{Stepper::magnus4, 16.0}, std::pair{Stepper::midpoint, 4.0}}) {
    std::vector<double> ch;
    for (std::size_t s : {16u, 32u, 64u}) {
      EvolveOptions o;
      o.steps = s;
      o.tol = 1e300;  // accept the first doubling; `change` then measures the error at s steps
      o.stepper = st;
      ch.push_back(evolve(c, p, o).change);
    }
    CHECK(ch[0] / ch[1] == doctest::Approx(ratio).epsilon(0.25));
    CHECK(ch[1] / ch[2] == doctest::Approx(ratio).epsilon(0.25));
  }
}

TEST_CASE("two-time measurement statistics") {
  const ChainSpec c{8, true, 0};
  SUBCASE("sudden quench from the ground state") {
    const auto p = QuenchProtocol::ground(1.0, 0.3, 0.0);
    const auto w = work_distribution(c, p);
    double tot = 0.0, mean = 0.0;
    for (auto [x, pr] : w.entries) tot += pr, mean += pr * x;
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
    // <W> = <g0| H(Delta_f) - H(0) |g0>
    const auto g = ground_state(build_hamiltonian(c, 0.0));
    const Eigen::MatrixXd dh = build_hamiltonian(c, 0.3).dense() - build_hamiltonian(c, 0.0).dense();
    CHECK(mean == doctest::Approx((g.state.adjoint() * dh.cast<cplx>() * g.state)(0).real()).epsilon(1e-12));
  }
  SUBCASE("no ramp gives a single atom") {
    const auto w = work_distribution(c, QuenchProtocol::ground(1.0, 0.0, 5.0));
    REQUIRE(w.entries.size() == 1);
    CHECK(std::abs(w.entries[0].first) <= 1e-10);
    CHECK(w.entries[0].second == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("support lies within the spectral bounds") {
    const auto p = QuenchProtocol::ground(1.0, 0.4, 2.0);
    const auto w = work_distribution(c, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(c, 0.4).dense());
    const double e0 = ground_state(build_hamiltonian(c, 0.0)).energy;
    for (auto [x, pr] : w.entries) {
      CHECK(x >= es.eigenvalues()(0) - e0 - 1e-10);
      CHECK(x <= es.eigenvalues().maxCoeff() - e0 + 1e-10);
      CHECK(pr > 0.0);
    }
  }
  SUBCASE("Jarzynski") {
    const auto p = QuenchProtocol::thermal(1.0, 0.2, 3.0, 1.5);
    const auto t = ttm_transitions(c, p);
    double s = 0.0;
    for (std::size_t i = 0; i < t.work.size(); ++i) s += t.weight[i] * std::exp(-p.beta * t.work[i]);
    CHECK(s == doctest::Approx(t.z_ratio).epsilon(1e-10));
  }
}

TEST_CASE("CFW and cumulants of the ED distribution") {
  const ChainSpec c{8, true, 0};
  for (const auto& p : {QuenchProtocol::ground(1.0, 0.1, 5.0), QuenchProtocol::thermal(1.0, 0.1, 5.0, 2.0)}) {
    const auto t = ttm_transitions(c, p);
    const auto w = work_distribution(t, p, 8);
    const auto km = ttm_cumulants(w, 4);
    CHECK(km.at(2) >= 0.0);
    CHECK(km.at(4) == km.kappa[3]);

    const auto kf = cumulants_from_cfw(cfw_ed(t, p, 8, stencil_grid(0.02)), 3);
    for (int n = 1; n <= 3; ++n) CHECK(std::abs(km.at(n) - kf.at(n)) <= 1e-6 * std::max(1.0, std::abs(km.at(n))));

    // G from the raw transitions and from the merged distribution agree
    const auto curve = cfw_ed(t, p, 8, mirrored(0.25, 40));
    for (std::size_t i = 0; i < curve.u.size(); ++i) {
      cplx g = 0.0;
      for (auto [x, pr] : w.entries) g += pr * std::exp(cplx(0.0, curve.u[i] * x));
      CHECK(std::abs(g - curve.g[i]) <= 1e-8);
    }
  }
}

TEST_CASE("ED regression records") {
  for (const char* name : {"ed_n8_ground.json", "ed_n8_beta2.json"}) {
    const auto path = std::filesystem::path(KZ_GOLDEN_DIR) / name;
    REQUIRE(std::filesystem::exists(path));
    const auto ref = io::golden_from_json(io::read_json_file(path.string()));
    const auto p = std::isinf(ref.beta) ? QuenchProtocol::ground(1.0, ref.delta_f, ref.tau_q)
                                        : QuenchProtocol::thermal(1.0, ref.delta_f, ref.tau_q, ref.beta);
    const ChainSpec c{ref.n_sites, true, 0};
    const auto t = ttm_transitions(c, p);
    const auto k = ttm_cumulants(work_distribution(t, p, c.n_sites), int(ref.kappas.size()));
    const auto g = cfw_ed(t, p, c.n_sites, ref.u);
    CAPTURE(name);
    for (std::size_t i = 0; i < ref.kappas.size(); ++i)
      CHECK(std::abs(k.kappa[i] - ref.kappas[i]) <= 1e-9 * std::max(1.0, std::abs(ref.kappas[i])));
    for (std::size_t i = 0; i < ref.u.size(); ++i) CHECK(std::abs(g.g[i] - ref.g[i]) <= 1e-9);
  }
}
