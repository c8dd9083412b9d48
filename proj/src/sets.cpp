#include "ll/sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ll/samplers.hpp"

namespace ll {

MeanStderr mc_mass(const MembershipSet& set, long samples, RandomStream& stream) {
  std::vector<double> hits;
  hits.reserve(std::size_t(samples));
  for (long i = 0; i < samples; ++i)
    hits.push_back(set.contains(set.ambient(stream)) ? 1.0 : 0.0);
  return mean_stderr(hits);
}

// ---- intersector building blocks ----

std::optional<Interval> sphere_chord(const Line& l, double rho) {
  // |o + t d|^2 = rho^2  <=>  |d|^2 t^2 + 2 <o,d> t + |o|^2 - rho^2 = 0
  const double a = norm2_sq(l.dir);
  if (a <= 0.0) throw std::invalid_argument("sphere_chord: zero direction");
  const double b = dot(l.origin, l.dir);
  const double c = norm2_sq(l.origin) - rho * rho;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  return Interval{(-b - s) / a, (-b + s) / a};
}

IntervalList shell_line_intervals(const Line& l, double r_lo, double r_hi) {
  auto outer = sphere_chord(l, r_hi);
  if (!outer) return {};
  if (r_lo <= 0.0) return {*outer};
  auto inner = sphere_chord(l, r_lo);
  if (!inner) return {*outer};
  return subtract_intervals({*outer}, {*inner});
}

std::optional<Interval> box_line_interval(const Line& l, double lo, double hi) {
  double ta = -std::numeric_limits<double>::infinity();
  double tb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < l.origin.size(); ++i) {
    const double o = l.origin[i], d = l.dir[i];
    if (d == 0.0) {
      if (o < lo || o > hi) return std::nullopt;
      continue;
    }
    double t1 = (lo - o) / d, t2 = (hi - o) / d;
    if (t1 > t2) std::swap(t1, t2);
    ta = std::max(ta, t1);
    tb = std::min(tb, t2);
    if (ta >= tb) return std::nullopt;
  }
  if (!std::isfinite(ta) || !std::isfinite(tb)) return std::nullopt;
  return Interval{ta, tb};
}

std::optional<Interval> sym_box_line_interval(const Line& l, double m) {
  return box_line_interval(l, -m, m);
}

std::optional<Interval> convex_sublevel(const std::function<double(double)>& f, double level,
                                        double t_hint, double step_hint) {
  double step = step_hint > 0.0 ? step_hint : 1.0;
  // bracket a minimizer by downhill expansion
  double a = t_hint - step, m = t_hint, b = t_hint + step;
  double fa = f(a), fm = f(m), fb = f(b);
  for (int it = 0; it < 200 && (fa < fm || fb < fm); ++it) {
    if (fa < fm) {
      b = m; fb = fm; m = a; fm = fa;
      step *= 2.0; a = m - step; fa = f(a);
    } else {
      a = m; fa = fm; m = b; fm = fb;
      step *= 2.0; b = m + step; fb = f(b);
    }
  }
  // golden section on [a, b]
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12 * (1.0 + std::fabs(a) + std::fabs(b))) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    }
  }
  const double tmin = 0.5 * (a + b);
  const double fmin = f(tmin);
  if (fmin > level) return std::nullopt;
  // expand until above level on each side, then bisect the crossing
  auto cross = [&](double sgn) {
    double inside = tmin, s = step_hint > 0.0 ? step_hint : 1.0;
    double outside = tmin + sgn * s;
    int guard = 0;
    while (f(outside) <= level) {
      inside = outside;
      s *= 2.0;
      outside = tmin + sgn * s;
      if (++guard > 400) throw std::runtime_error("convex_sublevel: no crossing found");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (f(mid) <= level) inside = mid; else outside = mid;
      if (std::fabs(outside - inside) <= 1e-10 * (1.0 + std::fabs(mid))) break;
    }
    return 0.5 * (inside + outside);
  };
  return Interval{cross(-1.0), cross(+1.0)};
}

// ---- the witness sets ----

MembershipSet euclidean_shell(int n, double r_lo, double r_hi) {
  if (r_hi <= r_lo || r_lo < 0.0) throw std::invalid_argument("euclidean_shell: bad radii");
  MembershipSet set;
  set.n = n;
  set.scale = r_hi;
  set.desc.kind = "euclidean_shell";
  set.desc.add("n", n);
  set.desc.add("r_lo", r_lo);
  set.desc.add("r_hi", r_hi);
  set.contains = [r_lo, r_hi](const Vec& x) {
    const double r = norm2(x);
    return r >= r_lo && r <= r_hi;
  };
  const double kap = kappa(2.0, n) > 0 ? kappa(2.0, n) : 1.0;
  set.ambient = [n, r_hi, kap](RandomStream& s) {
    Vec x = sample_lp_ball(LpBall(2.0, n), s);
    const double f = r_hi / kap;
    for (double& v : x) v *= f;
    return x;
  };
  set.intersector = [r_lo, r_hi](const Line& l) { return shell_line_intervals(l, r_lo, r_hi); };
  return set;
}

MembershipSet ball_shell_construction(int n) {
  const double rad = kappa(2.0, n);
  MembershipSet set = euclidean_shell(n, (1.0 - 1.0 / n) * rad, rad);
  set.desc.kind = "ball_shell";
  set.ambient = [n](RandomStream& s) { return sample_lp_ball(LpBall(2.0, n), s); };
  return set;
}

MembershipSet product_norm_shell(const ProductMeasure& mu, double eps, RandomStream& stream,
                                 long budget) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("product_norm_shell: bad eps");
  std::vector<double> norms(std::size_t(budget), 0.0);
  double sq = 0.0;
  for (long i = 0; i < budget; ++i) {
    const Vec x = sample_product(mu, stream);
    const double r2 = norm2_sq(x);
    sq += r2;
    norms[std::size_t(i)] = std::sqrt(r2);
  }
  const double E = std::sqrt(sq / double(budget));
  for (double& r : norms) r = std::fabs(r - E);
  const double t = quantile(norms, 1.0 - eps);
  const double chat = t / std::sqrt(std::fabs(std::log(eps)));

  MembershipSet set;
  set.n = mu.n;
  set.scale = E + t;
  set.desc.kind = "product_norm_shell";
  set.desc.add("n", mu.n);
  set.desc.add("eps", eps);
  set.desc.add("E", E);
  set.desc.add("C_hat", chat);
  const double r_lo = std::max(0.0, E - t), r_hi = E + t;
  set.contains = [r_lo, r_hi](const Vec& x) {
    const double r = norm2(x);
    return r >= r_lo && r <= r_hi;
  };
  set.ambient = [mu](RandomStream& s) { return sample_product(mu, s); };
  set.intersector = [r_lo, r_hi](const Line& l) { return shell_line_intervals(l, r_lo, r_hi); };
  return set;
}

MembershipSet lp_shell(double p, int n, double C0) {
  if (p <= 1.0 || p > 2.0) throw std::invalid_argument("lp_shell: need 1 < p <= 2");
  const double kap = kappa(p, n);
  const double kp = std::pow(kap, p);
  const double maxcoord = C0 * std::pow(std::log(double(n)), 1.0 / p);
  MembershipSet set;
  set.n = n;
  set.scale = kap;
  set.desc.kind = "lp_shell";
  set.desc.add("p", p);
  set.desc.add("n", n);
  set.desc.add("C0", C0);
  set.desc.add("max_coord", maxcoord);
  set.contains = [p, kp, C0, maxcoord](const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    if (m > maxcoord) return false;
    const double s = lp_pow_sum(x, p);
    return s <= kp && s >= kp - C0;
  };
  set.ambient = [p, n](RandomStream& s) { return sample_lp_ball(LpBall(p, n), s); };
  set.intersector = [p, kp, C0, maxcoord](const Line& l) -> IntervalList {
    auto slab = sym_box_line_interval(l, maxcoord);
    if (!slab) return {};
    auto f = [&](double t) { return lp_pow_sum(axpy(l.origin, t, l.dir), p); };
    const double step = 0.5 * slab->len() + 1e-6;
    auto outer = convex_sublevel(f, kp, 0.5 * (slab->lo + slab->hi), step);
    if (!outer) return {};
    IntervalList out = intersect_intervals({*outer}, {*slab});
    auto inner = convex_sublevel(f, kp - C0, 0.5 * (outer->lo + outer->hi), step);
    if (inner) out = subtract_intervals(out, {*inner});
    return out;
  };
  return set;
}

double calibrate_lp_shell(double p, int n, double target_mass, RandomStream& stream,
                          long budget) {
  const double kp = std::pow(kappa(p, n), p);
  const double lg = std::pow(std::log(double(n)), 1.0 / p);
  std::vector<double> need(std::size_t(budget), 0.0);
  for (long i = 0; i < budget; ++i) {
    const Vec x = sample_lp_ball(LpBall(p, n), stream);
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    // smallest C0 admitting this sample
    need[std::size_t(i)] = std::max(kp - lp_pow_sum(x, p), m / lg);
  }
  return quantile(need, target_mass);
}

HybridProfile::HybridProfile(double p_, int n_) : p(p_), n(n_) {
  if (p <= 2.0) throw std::invalid_argument("HybridProfile: need p > 2");
  breakpoint = std::pow(double(n), -1.0 / (2.0 * p + 1.0));
  quad_coef = 0.5 * p * std::pow(double(n), (2.0 - p) / (2.0 * p + 1.0));
  quad_const = (1.0 - 0.5 * p) * std::pow(double(n), -p / (2.0 * p + 1.0));
}

double HybridProfile::value(double r) const {
  const double a = std::fabs(r);
  if (a <= breakpoint) return quad_coef * r * r + quad_const;
  return std::pow(a, p);
}

double HybridProfile::deriv(double r) const {
  const double a = std::fabs(r);
  if (a <= breakpoint) return 2.0 * quad_coef * r;
  return (r >= 0.0 ? 1.0 : -1.0) * p * std::pow(a, p - 1.0);
}

MembershipSet hybrid_shell(double p, int n, double C0, double E) {
  const HybridProfile h(p, n);
  const double kap = kappa(p, n);
  const double kp = std::pow(kap, p);
  MembershipSet set;
  set.n = n;
  set.scale = kap;
  set.desc.kind = "hybrid_shell";
  set.desc.add("p", p);
  set.desc.add("n", n);
  set.desc.add("C0", C0);
  set.desc.add("E", E);
  set.contains = [h, p, kp, C0, E](const Vec& x) {
    if (lp_pow_sum(x, p) > kp) return false;
    double s = 0.0;
    for (double v : x) s += h.value(v);
    return std::fabs(s - E) <= C0;
  };
  set.ambient = [p, n](RandomStream& s) { return sample_lp_ball(LpBall(p, n), s); };
  set.intersector = [h, p, kp, C0, E, kap](const Line& l) -> IntervalList {
    auto fball = [&](double t) { return lp_pow_sum(axpy(l.origin, t, l.dir), p); };
    const double step = kap / (norm2(l.dir) + 1e-300) + 1e-9;
    auto chord = convex_sublevel(fball, kp, 0.0, step);
    if (!chord) return {};
    auto fh = [&](double t) {
      const Vec x = axpy(l.origin, t, l.dir);
      double s = 0.0;
      for (double v : x) s += h.value(v);
      return s;
    };
    auto outer = convex_sublevel(fh, E + C0, 0.5 * (chord->lo + chord->hi), step);
    if (!outer) return {};
    IntervalList out = intersect_intervals({*outer}, {*chord});
    auto inner = convex_sublevel(fh, E - C0, 0.5 * (outer->lo + outer->hi), step);
    if (inner) out = subtract_intervals(out, {*inner});
    return out;
  };
  return set;
}

HybridCalibration calibrate_hybrid_shell(double p, int n, double target_mass,
                                         RandomStream& stream, long budget) {
  const HybridProfile h(p, n);
  std::vector<double> sums(std::size_t(budget), 0.0);
  double total = 0.0;
  for (long i = 0; i < budget; ++i) {
    const Vec x = sample_lp_ball(LpBall(p, n), stream);
    double s = 0.0;
    for (double v : x) s += h.value(v);
    sums[std::size_t(i)] = s;
    total += s;
  }
  const double E = total / double(budget);
  for (double& s : sums) s = std::fabs(s - E);
  return {quantile(sums, target_mass), E};
}

MembershipSet striped_cube_shell(int n, double lambda, double eps, double delta,
                                 RandomStream& stream, long budget) {
  if (lambda <= 0.0 || lambda > 1.0 || delta <= 0.0)
    throw std::invalid_argument("striped_cube_shell: bad parameters");
  // smallest stripe period whose kept fraction w/k is within eps of lambda:
  // fewer classes per period keeps the near-tangency excess small
  const long k_cap = std::max<long>(2, long(std::floor(std::pow(delta, -0.2))));
  long k = k_cap;
  long w = std::max<long>(1, long(std::ceil(lambda * double(k_cap))));
  for (long kk = 2; kk <= k_cap; ++kk) {
    const long ww = std::max<long>(1, long(std::ceil(lambda * double(kk))));
    if (double(ww) / double(kk) <= lambda + 0.5 * eps) {
      k = kk;
      w = ww;
      break;
    }
  }
  auto stripe_index = [delta](double r) { return long(std::floor(r / delta)) + 1; };
  auto accepted = [k, w](long j, long i0) {
    long m = (j - i0) % k;
    if (m < 0) m += k;
    return m >= 1 && m <= w;
  };
  // pick the residue class whose stripes carry the most cube volume
  std::vector<double> volume(std::size_t(k), 0.0);
  for (long s = 0; s < budget; ++s) {
    Vec x(std::size_t(n), 0.0);
    for (double& v : x) v = stream.uniform(1.0, 2.0);
    long m = stripe_index(norm2(x)) % k;
    if (m < 0) m += k;
    // sample with residue m is accepted by i0 iff (m - i0) mod k in [1, w]
    for (long d = 1; d <= w; ++d) {
      long i0 = (m - d) % k;
      if (i0 < 0) i0 += k;
      volume[std::size_t(i0)] += 1.0;
    }
  }
  long i0 = long(std::max_element(volume.begin(), volume.end()) - volume.begin());

  MembershipSet set;
  set.n = n;
  set.scale = 2.0 * std::sqrt(double(n));
  set.desc.kind = "striped_cube_shell";
  set.desc.add("n", n);
  set.desc.add("lambda", lambda);
  set.desc.add("delta", delta);
  set.desc.add("k", double(k));
  set.desc.add("w", double(w));
  set.desc.add("i0", double(i0));
  set.contains = [stripe_index, accepted, i0](const Vec& x) {
    for (double v : x)
      if (v < 1.0 || v > 2.0) return false;
    return accepted(stripe_index(norm2(x)), i0);
  };
  set.ambient = [n](RandomStream& s) {
    Vec x(std::size_t(n), 0.0);
    for (double& v : x) v = s.uniform(1.0, 2.0);
    return x;
  };
  set.intersector = [delta, accepted, i0, stripe_index](const Line& l) -> IntervalList {
    auto cube = box_line_interval(l, 1.0, 2.0);
    if (!cube) return {};
    const double nd2 = norm2_sq(l.dir);
    const double tstar = std::clamp(-dot(l.origin, l.dir) / nd2,
                                    cube->lo, cube->hi);
    auto radius = [&](double t) { return norm2(axpy(l.origin, t, l.dir)); };
    // breakpoints where the radius crosses a stripe boundary, on each
    // monotone half of the chord
    std::vector<double> cuts{cube->lo, cube->hi};
    if (tstar > cube->lo && tstar < cube->hi) cuts.push_back(tstar);
    auto add_crossings = [&](double ta, double tb) {
      const double ra = radius(ta), rb = radius(tb);
      const double rmin = std::min(ra, rb), rmax = std::max(ra, rb);
      const long jlo = long(std::floor(rmin / delta)) + 1;
      const long jhi = long(std::floor(rmax / delta));
      if (jhi - jlo > 20000000L)
        throw std::runtime_error("striped_cube_shell: too many stripe crossings");
      for (long j = jlo; j <= jhi; ++j) {
        const double rho = delta * double(j);
        auto chord = sphere_chord(l, rho);
        if (!chord) continue;
        for (double t : {chord->lo, chord->hi})
          if (t > ta && t < tb) cuts.push_back(t);
      }
    };
    add_crossings(cube->lo, tstar);
    if (tstar < cube->hi) add_crossings(tstar, cube->hi);
    std::sort(cuts.begin(), cuts.end());
    IntervalList out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (b - a <= 0.0) continue;
      if (!accepted(stripe_index(radius(0.5 * (a + b))), i0)) continue;
      if (!out.empty() && out.back().hi >= a - 1e-14 * (1.0 + std::fabs(a)))
        out.back().hi = b;
      else
        out.push_back({a, b});
    }
    return out;
  };
  return set;
}

MembershipSet euclidean_ball_set(int n, double radius,
                                 std::function<Vec(RandomStream&)> ambient) {
  MembershipSet set;
  set.n = n;
  set.scale = radius;
  set.desc.kind = "euclidean_ball";
  set.desc.add("n", n);
  set.desc.add("radius", radius);
  set.contains = [radius](const Vec& x) { return norm2_sq(x) <= radius * radius; };
  const double kap = kappa(2.0, n);
  set.ambient = ambient ? std::move(ambient)
                        : std::function<Vec(RandomStream&)>([n, radius, kap](RandomStream& s) {
                            Vec x = sample_lp_ball(LpBall(2.0, n), s);
                            const double f = radius / kap;
                            for (double& v : x) v *= f;
                            return x;
                          });
  set.intersector = [radius](const Line& l) -> IntervalList {
    auto c = sphere_chord(l, radius);
    if (!c) return {};
    return {*c};
  };
  return set;
}

MembershipSet full_space(int n, std::function<Vec(RandomStream&)> ambient) {
  MembershipSet set;
  set.n = n;
  set.scale = std::sqrt(double(n));
  set.desc.kind = "full_space";
  set.desc.add("n", n);
  set.contains = [](const Vec&) { return true; };
  set.ambient = std::move(ambient);
  return set;
}

MembershipSet cube_set(int n, double half_width) {
  MembershipSet set;
  set.n = n;
  set.scale = half_width * std::sqrt(double(n));
  set.desc.kind = "cube";
  set.desc.add("n", n);
  set.desc.add("half_width", half_width);
  set.contains = [half_width](const Vec& x) {
    for (double v : x)
      if (std::fabs(v) > half_width) return false;
    return true;
  };
  set.ambient = [n, half_width](RandomStream& s) {
    Vec x(std::size_t(n), 0.0);
    for (double& v : x) v = s.uniform(-half_width, half_width);
    return x;
  };
  set.intersector = [half_width](const Line& l) -> IntervalList {
    auto b = box_line_interval(l, -half_width, half_width);
    if (!b) return {};
    return {*b};
  };
  return set;
}

}  // namespace ll
