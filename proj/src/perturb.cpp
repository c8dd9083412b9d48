#include "ll/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ll/quad.hpp"
#include "ll/samplers.hpp"

namespace ll {

namespace {

/// Solves x + pert(x) = y for the unique root of an increasing map
/// (|pert'| < 1), bisected inside [y - bound, y + bound].
double invert_monotone(const std::function<double(double)>& pert, double y, double bound) {
  double lo = y - bound - 1e-12, hi = y + bound + 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + pert(mid) < y) lo = mid; else hi = mid;
    if (hi - lo < 1e-13 * (1.0 + std::fabs(y))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<int> draw_signs(int m, RandomStream& stream) {
  std::vector<int> d(std::size_t(m), 0);
  for (int& v : d) v = stream.sign();
  return d;
}

/// log density of the norm of a standard Gaussian in R^n scaled by sigma
double log_chi_density(double s, int n, double sigma) {
  if (s <= 0.0) return -std::numeric_limits<double>::infinity();
  return (1.0 - 0.5 * n) * std::log(2.0) - std::lgamma(0.5 * n) +
         (n - 1) * std::log(s) - 0.5 * s * s / (sigma * sigma) - n * std::log(sigma);
}

}  // namespace

int scheme_dim(const PerturbationScheme& s) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ProductScheme>) return v.mu.n;
        else if constexpr (std::is_same_v<T, HighPScheme>) return v.ball.n;
        else if constexpr (std::is_same_v<T, LowPScheme>) return v.ball.n;
        else return v.n;
      },
      s);
}

int delta_count(const PerturbationScheme& s) {
  const int n = scheme_dim(s);
  if (std::holds_alternative<LowPScheme>(s)) return n / 2;
  if (std::holds_alternative<MixtureScheme>(s)) return 0;
  return n;
}

void validate_scheme(const PerturbationScheme& s, double eps) {
  const double tol = 1.0 + 1e-9;
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    if (std::fabs(v->r) > 1.0 || std::fabs(v->R) > 1.0)
      throw std::invalid_argument("ProductScheme: need |r|, |R| <= 1");
  } else if (const auto* v = std::get_if<HighPScheme>(&s)) {
    const double p = v->ball.p, n = v->ball.n, r = v->r, R = v->R;
    if (p <= 2.0) throw std::invalid_argument("HighPScheme: need p > 2");
    if (n * R * R * R * r * r * r * r > std::pow(eps, 6.0) * tol)
      throw std::invalid_argument("HighPScheme: n R^3 r^4 > eps^6");
    if (std::pow(R, 2.0 * p + 1.0) * tol < n)
      throw std::invalid_argument("HighPScheme: R^{2p+1} < n");
  } else if (const auto* v = std::get_if<LowPScheme>(&s)) {
    const double p = v->ball.p, n = v->ball.n, r = v->r, R1 = v->R1, R2 = v->R2;
    if (p <= 1.0 || p > 2.0) throw std::invalid_argument("LowPScheme: need 1 < p <= 2");
    // asymptotically R2 >= 1; at small n the canonical choice
    // 0.01 log^{1/p} n is admitted too
    const double r2_floor = std::min(1.0, 0.01 * std::pow(std::log(n), 1.0 / p));
    if (R2 < r2_floor / tol || R2 > tol * std::pow(std::log(n), 1.0 / p))
      throw std::invalid_argument("LowPScheme: R2 out of range");
    if (std::fabs(R1 - std::log(n)) > 1e-6 * std::log(n))
      throw std::invalid_argument("LowPScheme: R1 != log n");
    const double a = a_tilde(p, v->ball.n);
    const double drift = n / (R1 * R1) * r * r * std::pow(R2, -p) *
                         std::exp(-2.0 * std::pow(R2, p) / std::pow(a, p));
    if (drift > eps * eps * tol)
      throw std::invalid_argument("LowPScheme: drift bound exceeds eps^2");
    if (std::pow(r, 5.0) * n * n > tol)
      throw std::invalid_argument("LowPScheme: r^5 n^2 > 1");
  } else if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    if (v->n < 1 || std::fabs(v->r) > 1.0)
      throw std::invalid_argument("SimplexScheme: need n >= 1, |r| <= 1");
  } else if (const auto* v = std::get_if<MixtureScheme>(&s)) {
    if (v->n < 1 || v->r0 < 0.0)
      throw std::invalid_argument("MixtureScheme: need n >= 1, r0 >= 0");
  }
}

BaseDraw draw_base(const PerturbationScheme& s, RandomStream& stream) {
  BaseDraw b;
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    b.x = sample_tilted_product(v->mu, v->R, v->phi, stream);
    b.delta = draw_signs(v->mu.n, stream);
  } else if (const auto* v = std::get_if<HighPScheme>(&s)) {
    b.x = sample_lp_ball(v->ball, stream);
    b.delta = draw_signs(v->ball.n, stream);
  } else if (const auto* v = std::get_if<LowPScheme>(&s)) {
    b.x = sample_lp_ball(v->ball, stream);
    b.delta = draw_signs(v->ball.n / 2, stream);
  } else if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    SimplexDraw d = sample_simplex_latent(v->n, stream);
    b.x = std::move(d.x);
    b.g = std::move(d.g);
    b.z = d.z;
    b.delta = draw_signs(v->n, stream);
  } else if (const auto* v = std::get_if<MixtureScheme>(&s)) {
    b.x.resize(std::size_t(v->n));
    b.g.resize(std::size_t(v->n));
    for (double& t : b.x) t = stream.normal();
    for (double& t : b.g) t = stream.normal();
  }
  return b;
}

Vec apply_scheme(const PerturbationScheme& s, const BaseDraw& b, double u) {
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    Vec y(b.x.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = b.x[i] + v->r * u * double(b.delta[i]) * v->phi(b.x[i]);
    return y;
  }
  if (const auto* v = std::get_if<HighPScheme>(&s)) {
    Vec y(b.x.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = b.x[i] + u * double(b.delta[i]) * highp_phi(*v, b.x[i]);
    return y;
  }
  if (const auto* v = std::get_if<LowPScheme>(&s)) {
    const PairMap pm = pair_map(*v);
    Vec y = b.x;
    const std::size_t m = b.x.size() / 2;
    for (std::size_t i = 0; i < m; ++i) {
      const double x1 = b.x[2 * i], x2 = b.x[2 * i + 1];
      const double z = u * double(b.delta[i]);
      y[2 * i] = x1 + z * pm.h1(x1, x2).v;
      y[2 * i + 1] = x2 + z * pm.h2(x1, x2).v;
    }
    return y;
  }
  if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    const std::size_t n = b.g.size();
    Vec f(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = b.g[i] + u * v->r * double(b.delta[i]) * v->psi(b.g[i]);
      sum += f[i];
    }
    const double c = factorial_root(v->n) / (2.0 * (b.z + sum));
    for (double& t : f) t *= c;
    return f;
  }
  const auto& v = std::get<MixtureScheme>(s);
  Vec y(b.x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = b.x[i] + u * v.r0 * b.g[i];
  return y;
}

Vec invert_scheme(const PerturbationScheme& s, const Vec& y, const BaseDraw& latents,
                  double u) {
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    Vec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double c = v->r * u * double(latents.delta[i]);
      x[i] = invert_monotone([&](double t) { return c * v->phi(t); }, y[i], std::fabs(c));
    }
    return x;
  }
  if (const auto* v = std::get_if<HighPScheme>(&s)) {
    Vec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double c = u * double(latents.delta[i]);
      x[i] = invert_monotone([&](double t) { return c * highp_phi(*v, t); }, y[i],
                             std::fabs(u * v->r));
    }
    return x;
  }
  if (const auto* v = std::get_if<LowPScheme>(&s)) {
    const PairMap pm = pair_map(*v);
    Vec x = y;
    const std::size_t m = y.size() / 2;
    for (std::size_t i = 0; i < m; ++i) {
      // scale the map by u via a scaled copy of r through the jacobian sign z
      PairMap pmu = pm;
      pmu.r = pm.r * u;
      auto [x1, x2] = invert_pair(pmu, y[2 * i], y[2 * i + 1], latents.delta[i]);
      x[2 * i] = x1;
      x[2 * i + 1] = x2;
    }
    return x;
  }
  if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    // undo the renormalization with the stored z, then the monotone shifts
    const double c = factorial_root(v->n);
    double sy = 0.0;
    for (double t : y) sy += t;
    // sum f solves sy = c sf / (2 (z + sf))
    const double sf = 2.0 * latents.z * sy / (c - 2.0 * sy);
    const double scale = 2.0 * (latents.z + sf) / c;
    Vec g(y.size());
    double sg = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double fi = y[i] * scale;
      const double cc = u * v->r * double(latents.delta[i]);
      g[i] = invert_monotone([&](double t) { return cc * v->psi(t); }, fi,
                             std::fabs(u * v->r));
      sg += g[i];
    }
    // map the recovered exponentials back to the simplex point
    Vec x(y.size());
    const double back = c / (2.0 * (latents.z + sg));
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = g[i] * back;
    return x;
  }
  const auto& v = std::get<MixtureScheme>(s);
  Vec x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] - u * v.r0 * latents.g[i];
  return x;
}

// ---- 1-D perturbed density ----

double density_1d_perturbed(const TiltedComponent& tilt, double r, double t) {
  const BumpFn& phi = *tilt.phi;
  const double b = std::fabs(r);
  const double x1 = invert_monotone([&](double x) { return r * phi(x); }, t, b);
  const double x2 = invert_monotone([&](double x) { return -r * phi(x); }, t, b);
  const double d1 = tilt.density(x1) / (1.0 + r * phi.deriv(x1, 1));
  const double d2 = tilt.density(x2) / (1.0 - r * phi.deriv(x2, 1));
  return 0.5 * (d1 + d2);
}

double density_1d_perturbed(const Component& comp, double r, double R, const BumpFn& phi,
                            double t) {
  const TiltedComponent tilt(comp, phi, R);
  return density_1d_perturbed(tilt, r, t);
}

// ---- high-p density ----

double highp_phi(const HighPScheme& s, double x, int order) {
  return s.r * s.psi.eval(s.R * x, order) * std::pow(s.R, double(order));
}

double g_highp(const HighPScheme& s, double t) {
  const double d1 = highp_phi(s, t, 1), d0 = highp_phi(s, t, 0), d2 = highp_phi(s, t, 2);
  return d1 * d1 + d0 * d2;  // (phi^2 / 2)''
}

std::vector<int> highp_active_set(const HighPScheme& s, const Vec& y) {
  std::vector<int> idx;
  const double lo = s.psi.lo / s.R - s.r, hi = s.psi.hi / s.R + s.r;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] >= lo && y[i] <= hi) idx.push_back(int(i));
  return idx;
}

double density_highp(const HighPScheme& s, const Vec& y, long mc_samples,
                     RandomStream* stream) {
  const std::vector<int> active = highp_active_set(s, y);
  const double kp = std::pow(s.ball.radius, s.ball.p);

  double base_pow = 0.0;
  {
    std::vector<bool> is_active(y.size(), false);
    for (int i : active) is_active[std::size_t(i)] = true;
    Vec rest;
    rest.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!is_active[i]) rest.push_back(y[i]);
    if (!rest.empty()) base_pow = lp_pow_sum(rest, s.ball.p);
  }
  const int m = int(active.size());
  if (m == 0) return base_pow <= kp ? 1.0 : 0.0;

  // for each active coordinate and each sign, the inverse point, its
  // |x|^p contribution, and the volume factor (1 + phi'(x) delta)^{-1}
  std::vector<std::array<double, 2>> pw(std::size_t(m), {0.0, 0.0});
  std::vector<std::array<double, 2>> fac(std::size_t(m), {0.0, 0.0});
  for (int k = 0; k < m; ++k) {
    const double yk = y[std::size_t(active[std::size_t(k)])];
    for (int sbit = 0; sbit < 2; ++sbit) {
      const double d = sbit ? 1.0 : -1.0;
      const double x =
          invert_monotone([&](double t) { return d * highp_phi(s, t); }, yk, s.r);
      pw[std::size_t(k)][std::size_t(sbit)] = std::pow(std::fabs(x), s.ball.p);
      fac[std::size_t(k)][std::size_t(sbit)] = 1.0 / (1.0 + d * highp_phi(s, x, 1));
    }
  }

  if (mc_samples <= 0) {
    if (m > 24) throw std::invalid_argument("density_highp: active set too large to enumerate");
    const std::uint64_t total = 1ULL << m;
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double pow_sum = base_pow, f = 1.0;
      for (int k = 0; k < m; ++k) {
        const int sbit = int((mask >> k) & 1ULL);
        pow_sum += pw[std::size_t(k)][std::size_t(sbit)];
        f *= fac[std::size_t(k)][std::size_t(sbit)];
      }
      if (pow_sum <= kp) acc += f;
    }
    return acc / double(total);
  }

  if (!stream) throw std::invalid_argument("density_highp: MC mode needs a stream");
  double acc = 0.0;
  for (long it = 0; it < mc_samples; ++it) {
    double pow_sum = base_pow, f = 1.0;
    for (int k = 0; k < m; ++k) {
      const int sbit = (stream->next_u64() >> 63) ? 1 : 0;
      pow_sum += pw[std::size_t(k)][std::size_t(sbit)];
      f *= fac[std::size_t(k)][std::size_t(sbit)];
    }
    if (pow_sum <= kp) acc += f;
  }
  return acc / double(mc_samples);
}

// ---- low-p pair machinery ----

namespace {

/// order-2 jet of psi(R1 (x - R2)) as a function of the first variable
Jet2 psi_jet_x(const BumpFn& psi, double R1, double R2, double x) {
  const double sarg = R1 * (x - R2);
  Jet2 j;
  j.v = psi.eval(sarg, 0);
  j.dx = R1 * psi.eval(sarg, 1);
  j.dxx = R1 * R1 * psi.eval(sarg, 2);
  return j;
}

Jet2 psi_jet_y(const BumpFn& psi, double R1, double R2, double ycoord) {
  const double sarg = R1 * (ycoord - R2);
  Jet2 j;
  j.v = psi.eval(sarg, 0);
  j.dy = R1 * psi.eval(sarg, 1);
  j.dyy = R1 * R1 * psi.eval(sarg, 2);
  return j;
}

/// jet of t^{1-p} in the first variable
Jet2 pow_jet_x(double p, double x) {
  Jet2 j;
  j.v = std::pow(x, 1.0 - p);
  j.dx = (1.0 - p) * std::pow(x, -p);
  j.dxx = (1.0 - p) * (-p) * std::pow(x, -p - 1.0);
  return j;
}

Jet2 pow_jet_y(double p, double ycoord) {
  Jet2 j;
  j.v = std::pow(ycoord, 1.0 - p);
  j.dy = (1.0 - p) * std::pow(ycoord, -p);
  j.dyy = (1.0 - p) * (-p) * std::pow(ycoord, -p - 1.0);
  return j;
}

}  // namespace

PairMap pair_map(const LowPScheme& s) { return {s.ball.p, s.r, s.R1, s.R2, s.psi}; }

Jet2 PairMap::h1(double x1, double x2) const {
  if (x1 <= supp_lo() || x1 >= supp_hi() || x2 <= supp_lo() || x2 >= supp_hi())
    return Jet2{};
  Jet2 phi = psi_jet_x(psi, R1, R2, x1) * psi_jet_y(psi, R1, R2, x2) * r;
  return phi * pow_jet_x(p, x1);
}

Jet2 PairMap::h2(double x1, double x2) const {
  if (x1 <= supp_lo() || x1 >= supp_hi() || x2 <= supp_lo() || x2 >= supp_hi())
    return Jet2{};
  Jet2 phi = psi_jet_x(psi, R1, R2, x1) * psi_jet_y(psi, R1, R2, x2) * r;
  return phi * pow_jet_y(p, x2) * -1.0;
}

double pair_jacobian(const PairMap& pm, double w1, double w2, int z) {
  const Jet2 a = pm.h1(w1, w2), b = pm.h2(w1, w2);
  const double zz = double(z);
  return (1.0 + zz * a.dx) * (1.0 + zz * b.dy) - zz * zz * a.dy * b.dx;
}

double g_pair(const PairMap& pm, double y1, double y2) {
  const Jet2 a = pm.h1(y1, y2), b = pm.h2(y1, y2);
  const Jet2 sq1 = a * a, cross = a * b, sq2 = b * b;
  return 0.5 * sq1.dxx + cross.dxy + 0.5 * sq2.dyy;
}

std::pair<double, double> invert_pair(const PairMap& pm, double y1, double y2, int z) {
  double x1 = y1, x2 = y2;
  const double zz = double(z);
  for (int it = 0; it < 400; ++it) {
    const double n1 = y1 - zz * pm.h1(x1, x2).v;
    const double n2 = y2 - zz * pm.h2(x1, x2).v;
    const double dx = n1 - x1, dy = n2 - x2;
    x1 += 0.7 * dx;
    x2 += 0.7 * dy;
    if (std::fabs(dx) + std::fabs(dy) < 1e-14 * (1.0 + std::fabs(y1) + std::fabs(y2))) break;
  }
  return {x1, x2};
}

double density_lowp(const LowPScheme& s, const Vec& y, long mc_samples, RandomStream* stream) {
  if (!stream || mc_samples <= 0)
    throw std::invalid_argument("density_lowp: MC over delta requires a stream");
  const PairMap pm = pair_map(s);
  const double kp = std::pow(s.ball.radius, s.ball.p);
  const double widen = s.r * std::pow(pm.supp_lo(), 1.0 - s.ball.p);
  const double lo = pm.supp_lo() - widen, hi = pm.supp_hi() + widen;
  const std::size_t m = y.size() / 2;

  struct ActivePair {
    std::size_t idx;
    std::array<std::array<double, 2>, 2> x;  // [sign][coordinate]
    std::array<double, 2> inv_jac;           // [sign]
    std::array<double, 2> pow_delta;         // pow contribution per sign
  };
  std::vector<ActivePair> act;
  double base_pow = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double y1 = y[2 * i], y2 = y[2 * i + 1];
    const bool active = y1 > lo && y1 < hi && y2 > lo && y2 < hi;
    if (!active) {
      base_pow += std::pow(std::fabs(y1), s.ball.p) + std::pow(std::fabs(y2), s.ball.p);
      continue;
    }
    ActivePair ap;
    ap.idx = i;
    for (int sbit = 0; sbit < 2; ++sbit) {
      const int z = sbit ? 1 : -1;
      auto [x1, x2] = invert_pair(pm, y1, y2, z);
      ap.x[std::size_t(sbit)] = {x1, x2};
      ap.inv_jac[std::size_t(sbit)] = 1.0 / pair_jacobian(pm, x1, x2, z);
      ap.pow_delta[std::size_t(sbit)] =
          std::pow(std::fabs(x1), s.ball.p) + std::pow(std::fabs(x2), s.ball.p);
    }
    act.push_back(ap);
  }
  if (y.size() % 2 == 1) base_pow += std::pow(std::fabs(y.back()), s.ball.p);
  if (act.empty()) return base_pow <= kp ? 1.0 : 0.0;

  double acc = 0.0;
  for (long it = 0; it < mc_samples; ++it) {
    double pow_sum = base_pow, f = 1.0;
    for (const ActivePair& ap : act) {
      const int sbit = (stream->next_u64() >> 63) ? 1 : 0;
      pow_sum += ap.pow_delta[std::size_t(sbit)];
      f *= ap.inv_jac[std::size_t(sbit)];
    }
    if (pow_sum <= kp) acc += f;
  }
  return acc / double(mc_samples);
}

// ---- total variation ----

double tv_gaussian_radial(int n, double r) {
  const double s2 = std::sqrt(1.0 + r * r);
  auto f = [&](double s) {
    return std::fabs(std::exp(log_chi_density(s, n, 1.0)) -
                     std::exp(log_chi_density(s, n, s2)));
  };
  const double hi = s2 * (std::sqrt(double(n)) + 12.0);
  return 0.5 * gl32_composite(f, 1e-12, hi, 256);
}

ProductDensity::ProductDensity(const Component& comp, double r, double R, const BumpFn& phi,
                               int grid_points)
    : comp_(&comp), r_(r), tilt_(comp, phi, R) {
  cache_lo_ = std::max(phi.lo - std::fabs(r), comp.quad_lo + 1e-9);
  cache_hi_ = std::min(phi.hi + std::fabs(r), comp.quad_hi - 1e-9);
  cache_dt_ = (cache_hi_ - cache_lo_) / double(grid_points - 1);
  const auto& rule = gl32();
  log_ratio_cache_.assign(32, std::vector<double>(std::size_t(grid_points)));
  for (int k = 0; k < 32; ++k) {
    const double u = 0.5 * (rule.x[std::size_t(k)] + 1.0);
    for (int j = 0; j < grid_points; ++j) {
      const double t = cache_lo_ + cache_dt_ * double(j);
      const double rho = comp.density(t);
      const double f = density_1d_perturbed(tilt_, r * u, t);
      log_ratio_cache_[std::size_t(k)][std::size_t(j)] =
          (rho > 0.0 && f > 0.0) ? std::log(f / rho) : 0.0;
    }
  }
}

double ProductDensity::log_ratio_1d(double t, int u_node) const {
  if (t <= cache_lo_ || t >= cache_hi_) {
    // outside the perturbed zone f = tilted density; g vanishes there, so
    // the ratio is just the tilt normalizer
    return tilt_.log_kappa;
  }
  const double pos = (t - cache_lo_) / cache_dt_;
  const std::size_t j = std::min(std::size_t(pos), log_ratio_cache_[0].size() - 2);
  const double fr = pos - double(j);
  const auto& row = log_ratio_cache_[std::size_t(u_node)];
  return row[j] * (1.0 - fr) + row[j + 1] * fr;
}

double ProductDensity::density_at(double t, int u_node) const {
  return std::exp(log_ratio_1d(t, u_node)) * comp_->density(t);
}

double ProductDensity::log_ratio(const Vec& y) const {
  const auto& rule = gl32();
  double logs[32];
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 32; ++k) {
    double sum = 0.0;
    for (double t : y) sum += log_ratio_1d(t, k);
    logs[k] = sum;
    mx = std::max(mx, sum);
  }
  double acc = 0.0;
  for (int k = 0; k < 32; ++k) acc += 0.5 * rule.w[std::size_t(k)] * std::exp(logs[k] - mx);
  return mx + std::log(acc);
}

namespace {

TvEstimate tv_product_like(const Component& comp, int n, double r, double R,
                           const BumpFn& phi, long n_samples, RandomStream& stream) {
  const ProductDensity pd(comp, r, R, phi);
  std::vector<double> terms;
  terms.reserve(std::size_t(n_samples));
  Vec x(std::size_t(n), 0.0);
  for (long it = 0; it < n_samples; ++it) {
    for (double& t : x) t = comp.draw(stream);
    terms.push_back(0.5 * std::fabs(std::expm1(pd.log_ratio(x))));
  }
  const MeanStderr ms = mean_stderr(terms);
  TvEstimate tv;
  tv.density_term = ms.mean;
  tv.tv = ms.mean;
  tv.stderr_ = ms.stderr_;
  tv.n_samples = n_samples;
  return tv;
}

TvEstimate tv_ball_mc(const PerturbationScheme& s, const LpBall& ball, long n_samples,
                      RandomStream& stream,
                      const std::function<double(const Vec&, RandomStream&)>& density) {
  std::vector<double> dens_terms, esc_terms;
  dens_terms.reserve(std::size_t(n_samples));
  esc_terms.reserve(std::size_t(n_samples));
  const double kp = std::pow(ball.radius, ball.p);
  RandomStream dens_stream = stream.child(1);
  RandomStream esc_stream = stream.child(2);
  for (long it = 0; it < n_samples; ++it) {
    const Vec x = sample_lp_ball(ball, dens_stream);
    RandomStream inner = dens_stream.child(std::uint64_t(it));
    dens_terms.push_back(0.5 * std::fabs(density(x, inner) - 1.0));
  }
  for (long it = 0; it < n_samples; ++it) {
    const BaseDraw b = draw_base(s, esc_stream);
    const Vec y = apply_scheme(s, b, 1.0);
    esc_terms.push_back(lp_pow_sum(y, ball.p) <= kp ? 0.0 : 0.5);
  }
  const MeanStderr md = mean_stderr(dens_terms), me = mean_stderr(esc_terms);
  TvEstimate tv;
  tv.density_term = md.mean;
  tv.escape_term = me.mean;
  tv.escape_stderr = me.stderr_;
  tv.tv = md.mean + me.mean;
  tv.stderr_ = std::sqrt(md.stderr_ * md.stderr_ + me.stderr_ * me.stderr_);
  tv.n_samples = n_samples;
  return tv;
}

}  // namespace

TvEstimate tv_estimate(const PerturbationScheme& s, long n_samples, RandomStream& stream) {
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    if (v->mu.components.size() != 1)
      throw std::invalid_argument("tv_estimate: ProductScheme needs an i.i.d. measure");
    return tv_product_like(v->mu.comp(0), v->mu.n, v->r, v->R, v->phi, n_samples, stream);
  }
  if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    // latent view: the exponential product perturbed by g -> g + r psi(g) delta
    return tv_product_like(exponential_component(), v->n, v->r, 0.0, v->psi, n_samples,
                           stream);
  }
  if (const auto* v = std::get_if<HighPScheme>(&s)) {
    auto dens = [v](const Vec& x, RandomStream& inner) {
      const int m = int(highp_active_set(*v, x).size());
      return m <= 14 ? density_highp(*v, x) : density_highp(*v, x, 4096, &inner);
    };
    return tv_ball_mc(s, v->ball, n_samples, stream, dens);
  }
  if (const auto* v = std::get_if<LowPScheme>(&s)) {
    auto dens = [v](const Vec& x, RandomStream& inner) {
      return density_lowp(*v, x, 4096, &inner);
    };
    return tv_ball_mc(s, v->ball, n_samples, stream, dens);
  }
  const auto& v = std::get<MixtureScheme>(s);
  // radial laws: |X| vs |X + U r0 W|, the latter a U-mixture of scaled chis
  const auto& rule = gl32();
  auto f_mix = [&](double t) {
    double acc = 0.0;
    for (int k = 0; k < 32; ++k) {
      const double u = 0.5 * (rule.x[std::size_t(k)] + 1.0);
      const double sig = std::sqrt(1.0 + v.r0 * v.r0 * u * u);
      acc += 0.5 * rule.w[std::size_t(k)] * std::exp(log_chi_density(t, v.n, sig));
    }
    return acc;
  };
  auto f_base = [&](double t) { return std::exp(log_chi_density(t, v.n, 1.0)); };
  const double hi = std::sqrt(1.0 + v.r0 * v.r0) * (std::sqrt(double(v.n)) + 12.0);
  TvEstimate tv;
  tv.density_term =
      0.5 * gl32_composite([&](double t) { return std::fabs(f_mix(t) - f_base(t)); }, 1e-12,
                           hi, 256);
  tv.tv = tv.density_term;
  tv.n_samples = 0;
  return tv;
}

}  // namespace ll
