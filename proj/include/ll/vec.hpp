#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ll {

using Vec = std::vector<double>;

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2_sq(const Vec& a) { return dot(a, a); }
inline double norm2(const Vec& a) { return std::sqrt(norm2_sq(a)); }

/// ell_p norm, p in [1, inf]. p = inf gives the max norm.
inline double lp_norm(const Vec& x, double p) {
  if (x.empty()) throw std::invalid_argument("lp_norm: empty vector");
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
  }
  if (p == 2.0) return norm2(x);
  double s = 0.0;
  for (double v : x) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

/// sum_i |x_i|^p (finite p)
inline double lp_pow_sum(const Vec& x, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (double v : x) s += std::fabs(v);
  } else if (p == 2.0) {
    for (double v : x) s += v * v;
  } else if (p == 3.0) {
    for (double v : x) s += std::fabs(v) * v * v;
  } else if (p == 4.0) {
    for (double v : x) s += (v * v) * (v * v);
  } else {
    for (double v : x) s += std::pow(std::fabs(v), p);
  }
  return s;
}

inline Vec axpy(const Vec& x, double t, const Vec& d) {
  assert(x.size() == d.size());
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + t * d[i];
  return y;
}

/// One-dimensional probe: points origin + t * dir for t in [0, t_max].
struct Segment {
  Vec origin;
  Vec dir;       // nonzero
  double t_max;  // > 0
  double length() const { return t_max * norm2(dir); }
};

/// Infinite line through origin with direction dir.
struct Line {
  Vec origin;
  Vec dir;
};

struct Interval {
  double lo, hi;
  double len() const { return hi > lo ? hi - lo : 0.0; }
};

using IntervalList = std::vector<Interval>;

inline double total_length(const IntervalList& iv) {
  double s = 0.0;
  for (const auto& i : iv) s += i.len();
  return s;
}

/// Intersection of two sorted disjoint interval lists.
inline IntervalList intersect_intervals(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].lo, b[j].lo);
    double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) ++i; else ++j;
  }
  return out;
}

/// a minus b, both sorted disjoint.
inline IntervalList subtract_intervals(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (auto seg : a) {
    double cur = seg.lo;
    for (const auto& cut : b) {
      if (cut.hi <= cur || cut.lo >= seg.hi) continue;
      if (cut.lo > cur) out.push_back({cur, cut.lo});
      cur = std::max(cur, cut.hi);
    }
    if (cur < seg.hi) out.push_back({cur, seg.hi});
  }
  return out;
}

/// Clip list to [lo, hi].
inline IntervalList clip_intervals(const IntervalList& a, double lo, double hi) {
  return intersect_intervals(a, {{lo, hi}});
}

}  // namespace ll
