#pragma once

#include <array>
#include <cmath>

namespace ll {

/// Truncated Taylor series of order 4 in one variable. a[k] is the k-th
/// Taylor coefficient, so the k-th derivative is a[k] * k!.
struct Jet4 {
  std::array<double, 5> a{};

  static Jet4 variable(double t) {
    Jet4 j;
    j.a = {t, 1.0, 0.0, 0.0, 0.0};
    return j;
  }
  static Jet4 constant(double c) {
    Jet4 j;
    j.a = {c, 0.0, 0.0, 0.0, 0.0};
    return j;
  }
  double deriv(int k) const {
    static const double fact[5] = {1, 1, 2, 6, 24};
    return a[k] * fact[k];
  }

  Jet4 operator+(const Jet4& o) const {
    Jet4 r;
    for (int k = 0; k < 5; ++k) r.a[k] = a[k] + o.a[k];
    return r;
  }
  Jet4 operator-(const Jet4& o) const {
    Jet4 r;
    for (int k = 0; k < 5; ++k) r.a[k] = a[k] - o.a[k];
    return r;
  }
  Jet4 operator*(const Jet4& o) const {
    Jet4 r;
    for (int k = 0; k < 5; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a[j] * o.a[k - j];
      r.a[k] = s;
    }
    return r;
  }
  Jet4 operator*(double c) const {
    Jet4 r;
    for (int k = 0; k < 5; ++k) r.a[k] = a[k] * c;
    return r;
  }
  friend Jet4 operator*(double c, const Jet4& j) { return j * c; }
  friend Jet4 operator-(double c, const Jet4& j) {
    Jet4 r = j * -1.0;
    r.a[0] += c;
    return r;
  }
  friend Jet4 operator+(double c, const Jet4& j) {
    Jet4 r = j;
    r.a[0] += c;
    return r;
  }

  Jet4 recip() const {
    Jet4 r;
    r.a[0] = 1.0 / a[0];
    for (int k = 1; k < 5; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += a[j] * r.a[k - j];
      r.a[k] = -s / a[0];
    }
    return r;
  }

  Jet4 exp() const {
    Jet4 e;
    e.a[0] = std::exp(a[0]);
    // (k+1) e_{k+1} = sum_{j=0..k} (j+1) a_{j+1} e_{k-j}
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += (j + 1) * a[j + 1] * e.a[k - j];
      e.a[k + 1] = s / (k + 1);
    }
    return e;
  }

  Jet4 powi(int m) const {
    Jet4 r = constant(1.0), b = *this;
    int e = m;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
};

/// Second-order jet in two variables; fields hold true derivative values.
struct Jet2 {
  double v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }

  Jet2 operator+(const Jet2& o) const {
    return {v + o.v, dx + o.dx, dy + o.dy, dxx + o.dxx, dxy + o.dxy, dyy + o.dyy};
  }
  Jet2 operator-(const Jet2& o) const {
    return {v - o.v, dx - o.dx, dy - o.dy, dxx - o.dxx, dxy - o.dxy, dyy - o.dyy};
  }
  Jet2 operator*(const Jet2& o) const {
    Jet2 r;
    r.v = v * o.v;
    r.dx = dx * o.v + v * o.dx;
    r.dy = dy * o.v + v * o.dy;
    r.dxx = dxx * o.v + 2.0 * dx * o.dx + v * o.dxx;
    r.dyy = dyy * o.v + 2.0 * dy * o.dy + v * o.dyy;
    r.dxy = dxy * o.v + dx * o.dy + dy * o.dx + v * o.dxy;
    return r;
  }
  Jet2 operator*(double c) const { return {v * c, dx * c, dy * c, dxx * c, dxy * c, dyy * c}; }
};

}  // namespace ll
