#pragma once

#include <cmath>
#include <stdexcept>

namespace ll {

/// kappa_{p,n} = Gamma(1 + n/p)^{1/n} / (2 Gamma(1 + 1/p)); the radius that
/// normalizes the ell_p ball to volume one. p = inf gives the cube of
/// half-width 1/2.
inline double kappa(double p, int n) {
  if (n < 1) throw std::invalid_argument("kappa: n < 1");
  if (p < 1.0) throw std::invalid_argument("kappa: p < 1");
  if (std::isinf(p)) return 0.5;
  // log domain: stable up to n ~ 1e6
  double lg = std::lgamma(1.0 + double(n) / p) / double(n);
  return std::exp(lg) / (2.0 * std::exp(std::lgamma(1.0 + 1.0 / p)));
}

/// a_n = kappa_{p,n} p^{1/p} / n^{1/p}; the coordinate scale of a uniform
/// ell_p-ball point. Tends to e^{-1/p} / (2 Gamma(1+1/p)).
inline double a_tilde(double p, int n) {
  if (std::isinf(p)) throw std::invalid_argument("a_tilde: undefined for p = inf");
  if (p < 1.0) throw std::invalid_argument("a_tilde: p < 1");
  if (n < 1) throw std::invalid_argument("a_tilde: n < 1");
  return kappa(p, n) * std::exp((std::log(p) - std::log(double(n))) / p);
}

inline double a_tilde_limit(double p) {
  return std::exp(-1.0 / p) / (2.0 * std::exp(std::lgamma(1.0 + 1.0 / p)));
}

/// (n!)^{1/n}
inline double factorial_root(int n) { return std::exp(std::lgamma(n + 1.0) / n); }

/// Regularized lower incomplete gamma P(a, x). Series for x < a+1,
/// continued fraction otherwise.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad args");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

/// Upper tail p-value of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double stat, double df) { return gamma_q(df / 2.0, stat / 2.0); }

}  // namespace ll
