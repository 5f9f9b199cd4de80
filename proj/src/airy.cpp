#include "kzwork/airy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kzwork/errors.hpp"

namespace kzwork {
namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr double kSeriesRadius = 5.5;
// below this radius the series alone is always accurate; between it and
// kSeriesRadius (exponentially small Ai near the positive axis) both branches run
constexpr double kSeriesOnlyRadius = 4.0;
constexpr double kAsymptoticRadius = 9.0;

// Ai(0) and -Ai'(0)
const double c1 = 0.355028053887817239260063186004183176397979174199;
const double c2 = 0.258819403792806798405183560189203963479091138354;

double rel(double abs_err, cplx value) {
  const double m = std::abs(value);
  return m > 0.0 ? abs_err / m : abs_err;
}

struct Ai1 {
  cplx ai, aip;
  double err_ai, err_aip;  // relative
};

// u_k and v_k coefficients of the Airy asymptotic series
struct Coeffs {
  static constexpr int kMax = 60;
  double u[kMax + 1];
  double v[kMax + 1];
  Coeffs() {
    u[0] = v[0] = 1.0;
    for (int k = 1; k <= kMax; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / (216.0 * k * (2.0 * k - 1));
      v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
    }
  }
};
const Coeffs& coeffs() {
  static const Coeffs c;
  return c;
}

// Sums sum_k (-1)^k c_k x^k with x = 1/zeta until terms start growing.
// Returns the sum and the magnitude of the first omitted term.
struct SeriesSum {
  cplx sum;
  double tail;
};
SeriesSum alt_series(const double* c, cplx x, int stride, int offset) {
  cplx sum = 0.0;
  cplx xs = 1.0;
  cplx step = x;
  for (int s = 1; s < stride; ++s) step *= x;
  if (offset) xs = x;
  double prev = std::numeric_limits<double>::infinity();
  double sign = 1.0;
  for (int j = 0;; ++j) {
    const int k = offset + stride * j;
    if (k > Coeffs::kMax) return {sum, prev};
    const cplx term = sign * c[k] * xs;
    const double mag = std::abs(term);
    if (mag > prev) return {sum, prev};
    sum += term;
    if (mag <= kEps * std::abs(sum)) return {sum, mag};
    prev = mag;
    xs *= step;
    sign = -sign;
  }
}

// Exponential form, valid for |arg z| <= 2pi/3 here.
Ai1 ai_exponential(cplx z) {
  const Coeffs& c = coeffs();
  const cplx z14 = std::pow(z, 0.25);
  const cplx zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const cplx x = 1.0 / zeta;
  const SeriesSum su = alt_series(c.u, x, 1, 0);
  const SeriesSum sv = alt_series(c.v, x, 1, 0);
  const cplx pre = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
  Ai1 r;
  r.ai = pre / z14 * su.sum;
  r.aip = -pre * z14 * sv.sum;
  r.err_ai = rel(su.tail, su.sum) + 4 * kEps;
  r.err_aip = rel(sv.tail, sv.sum) + 4 * kEps;
  return r;
}

// Oscillatory form for Ai(-w), |arg w| <= pi/3.
Ai1 ai_oscillatory(cplx w) {
  const Coeffs& c = coeffs();
  const cplx w14 = std::pow(w, 0.25);
  const cplx zeta = 2.0 / 3.0 * w * std::sqrt(w);
  const cplx x = 1.0 / zeta;
  const cplx ph = zeta - kPi / 4.0;
  const cplx cs = std::cos(ph), sn = std::sin(ph);
  const SeriesSum ue = alt_series(c.u, x, 2, 0);
  const SeriesSum uo = alt_series(c.u, x, 2, 1);
  const SeriesSum ve = alt_series(c.v, x, 2, 0);
  const SeriesSum vo = alt_series(c.v, x, 2, 1);
  const double isp = 1.0 / std::sqrt(kPi);
  const cplx ba = cs * ue.sum + sn * uo.sum;
  const cplx bp = sn * ve.sum - cs * vo.sum;
  Ai1 r;
  r.ai = isp / w14 * ba;
  r.aip = isp * w14 * bp;
  const double ea = std::abs(cs) * ue.tail + std::abs(sn) * uo.tail;
  const double ep = std::abs(sn) * ve.tail + std::abs(cs) * vo.tail;
  // cancellation between the cos and sin pieces shows up as |ba| << |cs|+|sn|
  const double ra = (std::abs(cs) * std::abs(ue.sum) + std::abs(sn) * std::abs(uo.sum)) * kEps * 4;
  const double rp = (std::abs(sn) * std::abs(ve.sum) + std::abs(cs) * std::abs(vo.sum)) * kEps * 4;
  r.err_ai = rel(ea + ra, ba);
  r.err_aip = rel(ep + rp, bp);
  return r;
}

Ai1 ai_asymptotic(cplx z) {
  if (std::abs(std::arg(z)) <= 2.0 * kPi / 3.0) return ai_exponential(z);
  return ai_oscillatory(-z);
}

}  // namespace

AiryValues airy_series(cplx z) {
  // f = sum z^{3k} 1*4*...*(3k-2)/(3k)!,  g = sum z^{3k+1} 2*5*...*(3k-1)/(3k+1)!
  const cplx z3 = z * z * z;
  cplx tf = 1.0, tg = z, tfp = 0.0, tgp = 1.0;
  cplx f = tf, g = tg, fp = 0.0, gp = tgp;
  double af = 1.0, ag = std::abs(z), afp = 0.0, agp = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double dk = k;
    tf *= z3 / ((3 * dk) * (3 * dk - 1));
    tg *= z3 / ((3 * dk) * (3 * dk + 1));
    tfp = (k == 1) ? z * z / 2.0 : tfp * z3 / ((3 * dk - 1) * (3 * dk - 3));
    tgp *= z3 / ((3 * dk) * (3 * dk - 2));
    f += tf;
    g += tg;
    fp += tfp;
    gp += tgp;
    af += std::abs(tf);
    ag += std::abs(tg);
    afp += std::abs(tfp);
    agp += std::abs(tgp);
    const double tiny = kEps * 0.25;
    if (std::abs(tf) <= tiny * std::abs(f) && std::abs(tg) <= tiny * std::abs(g) &&
        std::abs(tfp) <= tiny * std::abs(fp) && std::abs(tgp) <= tiny * std::abs(gp)) {
      break;
    }
  }
  AiryValues r;
  const double s3 = std::sqrt(3.0);
  r.ai = c1 * f - c2 * g;
  r.aip = c1 * fp - c2 * gp;
  r.bi = s3 * (c1 * f + c2 * g);
  r.bip = s3 * (c1 * fp + c2 * gp);
  // rounding in the partial sums, relative to each result
  const double ea = 2 * kEps * (c1 * af + c2 * ag);
  const double ep = 2 * kEps * (c1 * afp + c2 * agp);
  r.rel_error = std::max({rel(ea, r.ai), rel(ep, r.aip), rel(s3 * ea, r.bi), rel(s3 * ep, r.bip)});
  return r;
}

AiryValues airy_asymptotic(cplx z) {
  if (z == cplx(0.0)) throw DomainError("asymptotic Airy expansion needs z != 0");
  const cplx om = std::polar(1.0, 2.0 * kPi / 3.0);
  const Ai1 a = ai_asymptotic(z);
  const Ai1 ap = ai_asymptotic(z * om);
  const Ai1 am = ai_asymptotic(z * std::conj(om));
  AiryValues r;
  r.ai = a.ai;
  r.aip = a.aip;
  const cplx e1 = std::polar(1.0, kPi / 6.0), e5 = std::polar(1.0, 5.0 * kPi / 6.0);
  const cplx bp1 = e1 * ap.ai, bm1 = std::conj(e1) * am.ai;
  const cplx bp2 = e5 * ap.aip, bm2 = std::conj(e5) * am.aip;
  r.bi = bp1 + bm1;
  r.bip = bp2 + bm2;
  const double eb = rel(std::abs(bp1) * ap.err_ai + std::abs(bm1) * am.err_ai + kEps * std::abs(bp1), r.bi);
  const double ebp = rel(std::abs(bp2) * ap.err_aip + std::abs(bm2) * am.err_aip + kEps * std::abs(bp2), r.bip);
  r.rel_error = std::max({a.err_ai, a.err_aip, eb, ebp});
  return r;
}

AiryValues airy(cplx z) {
  const double r = std::abs(z);
  AiryValues out;
  if (r <= kSeriesOnlyRadius) {
    out = airy_series(z);
  } else if (r <= kSeriesRadius) {
    out = airy_series(z);
    if (out.rel_error > 1e-13) {
      const AiryValues a = airy_asymptotic(z);
      if (a.rel_error < out.rel_error) out = a;
    }
  } else if (r >= kAsymptoticRadius) {
    out = airy_asymptotic(z);
  } else {
    const AiryValues s = airy_series(z);
    const AiryValues a = airy_asymptotic(z);
    out = s.rel_error <= a.rel_error ? s : a;
  }
  if (!(out.rel_error <= 1e-8)) throw PrecisionLoss("Airy evaluation cannot reach 1e-8 relative accuracy");
  return out;
}

}  // namespace kzwork
