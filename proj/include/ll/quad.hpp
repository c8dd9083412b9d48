#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace ll {

/// 32-node Gauss-Legendre rule on [-1, 1]; nodes/weights computed once by
/// Newton iteration on the Legendre polynomial.
struct GaussLegendre32 {
  std::array<double, 32> x{}, w{};
  GaussLegendre32() {
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double z1 = z;
        z = z1 - p0 / pp;
        if (std::fabs(z - z1) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }
};

inline const GaussLegendre32& gl32() {
  static const GaussLegendre32 rule;
  return rule;
}

/// integral of f over [a, b] with 32-node Gauss-Legendre
template <typename F>
double gl32_integrate(F&& f, double a, double b) {
  const auto& r = gl32();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 32; ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

/// composite GL32 over m panels
template <typename F>
double gl32_composite(F&& f, double a, double b, int m) {
  double s = 0.0, h = (b - a) / m;
  for (int i = 0; i < m; ++i) s += gl32_integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

namespace detail {
template <typename F>
double adsimp(F& f, double a, double b, double fa, double fm, double fb, double whole,
              double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adsimp(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adsimp(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}
}  // namespace detail

template <typename F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-10, int depth = 40) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adsimp(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace ll
