#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace horolab {

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal interval
  size_t count = 0;
};

inline MeanCi mean_ci(std::span<const double> xs) {
  MeanCi r;
  r.count = xs.size();
  if (xs.empty()) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double q = 0.0;
  for (double x : xs) {
    double d = x - r.mean;
    q += d * d;
  }
  double var = q / static_cast<double>(xs.size() - 1);
  r.half_width = 1.959963984540054 * std::sqrt(var / static_cast<double>(xs.size()));
  return r;
}

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

inline WilsonInterval wilson_interval(size_t successes, size_t n, double z = 1.959963984540054) {
  WilsonInterval w;
  if (n == 0) return w;
  double p = static_cast<double>(successes) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / static_cast<double>(n);
  double center = p + z2 / (2.0 * static_cast<double>(n));
  double rad = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) +
                             z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n)));
  w.lo = (center - rad) / denom;
  w.hi = (center + rad) / denom;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  return w;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  size_t count = 0;
};

inline LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  LineFit f;
  f.count = xs.size();
  if (xs.size() < 2) {
    if (xs.size() == 1) f.intercept = ys[0];
    return f;
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy > 0.0) {
    double ssr = syy - f.slope * sxy;
    f.r2 = 1.0 - ssr / syy;
  } else {
    f.r2 = 1.0;
  }
  return f;
}

}  // namespace horolab
