#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ll/special.hpp"

namespace ll {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  r.n = long(xs.size());
  if (r.n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / r.n;
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  if (r.n > 1) r.stderr_ = std::sqrt(v / (r.n - 1) / r.n);
  return r;
}

/// Covariance of paired samples with stderr via batch means.
inline MeanStderr cov_stderr(const std::vector<double>& a, const std::vector<double>& b,
                             int batches = 50) {
  std::size_t n = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
  ma /= n; mb /= n;
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
  // batch means of the centered products
  std::vector<double> bm;
  std::size_t bs = n / batches;
  for (int k = 0; k < batches; ++k) {
    double s = 0.0;
    for (std::size_t i = k * bs; i < (k + 1) * bs; ++i) s += prod[i];
    bm.push_back(s / bs);
  }
  return mean_stderr(bm);
}

inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty");
  std::sort(xs.begin(), xs.end());
  double pos = q * (xs.size() - 1);
  std::size_t i = std::size_t(pos);
  if (i + 1 >= xs.size()) return xs.back();
  double frac = pos - double(i);
  return xs[i] * (1.0 - frac) + xs[i + 1] * frac;
}

/// Ordinary least squares fit of y against x.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

inline OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t k = x.size();
  if (k < 2 || y.size() != k) throw std::invalid_argument("ols: need >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) { mx += x[i]; my += y[i]; }
  mx /= k; my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("ols: degenerate abscissas");
  OlsFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  if (k > 2) f.slope_stderr = std::sqrt(rss / double(k - 2) / sxx);
  return f;
}

/// Two-sample chi-square test on binned counts. Bins with small combined
/// counts are pooled. Returns the p-value.
inline double chi2_two_sample_pvalue(const std::vector<long>& c1, const std::vector<long>& c2) {
  double n1 = 0, n2 = 0;
  for (long c : c1) n1 += c;
  for (long c : c2) n2 += c;
  double k1 = std::sqrt(n2 / n1), k2 = std::sqrt(n1 / n2);
  double stat = 0.0;
  int used = 0;
  double p1 = 0, p2 = 0;  // pooled small bins
  for (std::size_t i = 0; i < c1.size(); ++i) {
    double a = double(c1[i]) + p1, b = double(c2[i]) + p2;
    if (a + b < 10.0) { p1 = a; p2 = b; continue; }
    p1 = p2 = 0.0;
    double d = k1 * a - k2 * b;
    stat += d * d / (a + b);
    ++used;
  }
  if (p1 + p2 >= 1.0 && used > 0) {
    double d = k1 * p1 - k2 * p2;
    stat += d * d / (p1 + p2);
  }
  if (used < 2) return 1.0;
  return chi2_pvalue(stat, double(used - 1));
}

}  // namespace ll
