#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "ll/jet.hpp"

namespace ll {

/// Smooth nonnegative compactly supported function with derivatives up to
/// order 4. Vanishes with all derivatives outside [lo, hi].
struct BumpFn {
  double lo, hi;
  std::function<double(double, int)> eval;  // (t, order 0..4)

  double operator()(double t) const { return eval(t, 0); }
  double deriv(double t, int k) const { return eval(t, k); }
};

/// phi(t) = (1 - 9 t^2)^5 / 100 on (-1/3, 1/3); phi(0) = 1/100, |phi'| < 1.
inline BumpFn bump_phi() {
  BumpFn b;
  b.lo = -1.0 / 3.0;
  b.hi = 1.0 / 3.0;
  b.eval = [](double t, int k) -> double {
    if (k < 0 || k > 4) throw std::invalid_argument("bump_phi: order out of range");
    if (std::fabs(t) >= 1.0 / 3.0) return 0.0;
    Jet4 x = Jet4::variable(t);
    Jet4 u = 1.0 - 9.0 * (x * x);
    Jet4 v = u.powi(5) * 0.01;
    return v.deriv(k);
  };
  return b;
}

/// psi(t) = exp(1 - 1/(1 - s^2)), s = 2t - 3, supported on [1, 2], max 1 at 3/2.
inline BumpFn bump_psi() {
  BumpFn b;
  b.lo = 1.0;
  b.hi = 2.0;
  b.eval = [](double t, int k) -> double {
    if (k < 0 || k > 4) throw std::invalid_argument("bump_psi: order out of range");
    double sv = 2.0 * t - 3.0;
    double uv = 1.0 - sv * sv;
    if (uv <= 1e-7) return 0.0;  // exp(-1/u) and all derivatives below underflow
    Jet4 x = Jet4::variable(t);
    Jet4 s = 2.0 * x - Jet4::constant(3.0);
    Jet4 u = 1.0 - s * s;
    Jet4 w = (1.0 - u.recip()).exp();
    return w.deriv(k);
  };
  return b;
}

}  // namespace ll
