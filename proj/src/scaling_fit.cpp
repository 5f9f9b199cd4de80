#include "kzwork/scaling_fit.hpp"

#include <algorithm>
#include <cmath>

#include "kzwork/errors.hpp"

namespace kzwork {
namespace {

struct Line {
  double slope, intercept, ssr;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - icpt - slope * x[i];
    ssr += r * r;
  }
  return {slope, icpt, ssr};
}

}  // namespace

ScalingFit fit_scaling(std::span<const ScalingPoint> points, bool detect_log) {
  if (points.size() < 6) throw DomainError("fit_scaling: need at least 6 points");
  double tmin = INFINITY, tmax = 0;
  std::vector<double> lx, ly;
  for (auto [t, y] : points) {
    if (!(t > 0.0)) throw DomainError("fit_scaling: tau must be positive");
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("fit_scaling: values must be positive and finite");
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    lx.push_back(std::log(t));
    ly.push_back(std::log(y));
  }
  if (tmax / tmin < 10.0 * (1.0 - 1e-12)) throw DomainError("fit_scaling: tau span below one decade");

  double my = 0;
  for (double v : ly) my += v;
  my /= double(ly.size());
  double sst = 0;
  for (double v : ly) sst += (v - my) * (v - my);

  const Line power = ols(lx, ly);
  ScalingFit fit;
  fit.exponent = power.slope;
  fit.prefactor = std::exp(power.intercept);
  fit.residual = power.ssr;
  fit.tau_min = tmin;
  fit.tau_max = tmax;

  if (detect_log && tmin > 1.0) {
    std::vector<double> ry(ly.size());
    for (std::size_t i = 0; i < ly.size(); ++i) ry[i] = ly[i] - std::log(lx[i]);
    const Line lg = ols(lx, ry);
    if (lg.ssr < power.ssr) {
      fit.exponent = lg.slope;
      fit.prefactor = std::exp(lg.intercept);
      fit.residual = lg.ssr;
      fit.log_correction = true;
    }
  }
  fit.r_squared = sst > 0.0 ? std::clamp(1.0 - fit.residual / sst, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<ScalingPoint> upper_envelope(std::span<const ScalingPoint> points, double window) {
  if (!(window > 0.0)) throw DomainError("upper_envelope: window must be positive");
  std::vector<ScalingPoint> out;
  std::size_t i = 0;
  while (i < points.size()) {
    const double start = points[i].first;
    ScalingPoint best = points[i];
    std::size_t j = i;
    while (j < points.size() && points[j].first < start + window) {
      if (points[j].second > best.second) best = points[j];
      ++j;
    }
    out.push_back(best);
    i = j;
  }
  return out;
}

}  // namespace kzwork
