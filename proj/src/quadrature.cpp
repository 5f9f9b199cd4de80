#include "kzwork/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "kzwork/errors.hpp"

namespace kzwork {
namespace {

// Kronrod 15 nodes (positive half) and weights, embedded Gauss 7 weights.
constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                          0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                          0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using cplx = std::complex<double>;

struct Panel {
  double a, b;
  std::vector<cplx> val;
  std::vector<double> err;
  double score;  // max over components of err / tolerance share
  bool operator<(const Panel& o) const { return score < o.score; }
};

void gk15(const std::function<void(double, std::span<cplx>)>& f, std::size_t dim, double a, double b,
          std::vector<cplx>& kron, std::vector<double>& err, std::vector<cplx>& buf) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<cplx> gauss(dim, 0.0);
  kron.assign(dim, 0.0);
  std::span<cplx> out(buf.data(), dim);
  f(c, out);
  for (std::size_t d = 0; d < dim; ++d) {
    kron[d] += wk[7] * out[d];
    gauss[d] += wg[3] * out[d];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xk[j];
    for (double x : {c - dx, c + dx}) {
      f(x, out);
      for (std::size_t d = 0; d < dim; ++d) {
        kron[d] += wk[j] * out[d];
        if (j % 2 == 1) gauss[d] += wg[j / 2] * out[d];
      }
    }
  }
  err.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    kron[d] *= h;
    gauss[d] *= h;
    err[d] = std::abs(kron[d] - gauss[d]);
  }
}

}  // namespace

VecQuadResult integrate_vec(const std::function<void(double, std::span<cplx>)>& f, std::size_t dim,
                            std::span<const double> breakpoints, const QuadOptions& opt) {
  if (breakpoints.size() < 2) throw DomainError("integrate_vec: need at least two breakpoints");
  std::vector<cplx> buf(dim);
  std::vector<Panel> panels;
  panels.reserve(breakpoints.size());
  VecQuadResult r;
  r.value.assign(dim, 0.0);
  r.error.assign(dim, 0.0);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p{breakpoints[i], breakpoints[i + 1], {}, {}, 0.0};
    gk15(f, dim, p.a, p.b, p.val, p.err, buf);
    for (std::size_t d = 0; d < dim; ++d) {
      r.value[d] += p.val[d];
      r.error[d] += p.err[d];
    }
    panels.push_back(std::move(p));
  }

  auto tol = [&](std::size_t d) { return std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value[d])); };
  auto converged = [&] {
    for (std::size_t d = 0; d < dim; ++d)
      if (r.error[d] > tol(d)) return false;
    return true;
  };
  auto score = [&](const Panel& p) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) s = std::max(s, p.err[d] / tol(d));
    return s;
  };

  std::priority_queue<Panel> heap;
  for (auto& p : panels) {
    p.score = score(p);
    heap.push(std::move(p));
  }
  std::size_t count = heap.size();
  std::size_t since_rescore = 0;
  while (!converged()) {
    if (count >= opt.max_panels) throw QuadratureError("integrate_vec: panel budget exhausted");
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    Panel l{p.a, m, {}, {}, 0.0}, rr{m, p.b, {}, {}, 0.0};
    gk15(f, dim, l.a, l.b, l.val, l.err, buf);
    gk15(f, dim, rr.a, rr.b, rr.val, rr.err, buf);
    for (std::size_t d = 0; d < dim; ++d) {
      r.value[d] += l.val[d] + rr.val[d] - p.val[d];
      r.error[d] += l.err[d] + rr.err[d] - p.err[d];
    }
    l.score = score(l);
    rr.score = score(rr);
    heap.push(std::move(l));
    heap.push(std::move(rr));
    ++count;
    // tolerances move with the running value; refresh priorities now and then
    if (++since_rescore > 256) {
      std::vector<Panel> all;
      all.reserve(heap.size());
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      // recompute error sums to shed accumulated rounding
      std::fill(r.error.begin(), r.error.end(), 0.0);
      for (const auto& q : all)
        for (std::size_t d = 0; d < dim; ++d) r.error[d] += q.err[d];
      for (auto& q : all) {
        q.score = score(q);
        heap.push(std::move(q));
      }
      since_rescore = 0;
    }
  }
  // final value from a clean sum over panels
  std::fill(r.value.begin(), r.value.end(), 0.0);
  std::vector<Panel> all;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& q : all)
    for (std::size_t d = 0; d < dim; ++d) r.value[d] += q.val[d];
  r.panels = all.size();
  return r;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
                     std::size_t initial_panels) {
  if (!(b > a)) throw DomainError("integrate: need b > a");
  initial_panels = std::max<std::size_t>(1, initial_panels);
  std::vector<double> bp(initial_panels + 1);
  for (std::size_t i = 0; i <= initial_panels; ++i) bp[i] = a + (b - a) * double(i) / double(initial_panels);
  bp.back() = b;
  const VecQuadResult v = integrate_vec([&](double x, std::span<cplx> out) { out[0] = f(x); }, 1, bp, opt);
  return {v.value[0].real(), v.error[0], v.panels};
}

}  // namespace kzwork
