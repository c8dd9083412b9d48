#include "ll/finder.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "ll/samplers.hpp"

namespace ll {

std::string scheme_text(const PerturbationScheme& s) {
  std::ostringstream os;
  if (const auto* v = std::get_if<ProductScheme>(&s)) {
    os << "product n=" << v->mu.n << " comp=" << v->mu.comp(0).name << " r=" << v->r
       << " R=" << v->R;
  } else if (const auto* v = std::get_if<HighPScheme>(&s)) {
    os << "highp n=" << v->ball.n << " p=" << v->ball.p << " r=" << v->r << " R=" << v->R;
  } else if (const auto* v = std::get_if<LowPScheme>(&s)) {
    os << "lowp n=" << v->ball.n << " p=" << v->ball.p << " r=" << v->r << " R1=" << v->R1
       << " R2=" << v->R2;
  } else if (const auto* v = std::get_if<SimplexScheme>(&s)) {
    os << "simplex n=" << v->n << " r=" << v->r;
  } else {
    const auto& m = std::get<MixtureScheme>(s);
    os << "mixture n=" << m.n << " r0=" << m.r0;
  }
  return os.str();
}

PerturbationScheme default_product_params(const ProductMeasure& mu, double a,
                                          const FinderConfig& cfg) {
  ProductScheme s;
  s.mu = mu;
  s.phi = bump_phi();
  const double n4 = std::pow(double(mu.n), -0.25);
  if (a < 0.5)
    s.r = n4 / std::pow(2.0 * cfg.c_tilde, 0.25);
  else
    s.r = cfg.c_large * n4 * std::pow(std::fabs(std::log(cfg.eps)), 0.25);
  s.R = s.r;
  PerturbationScheme out = std::move(s);
  validate_scheme(out, cfg.eps);
  return out;
}

PerturbationScheme default_params(double p, int n, double a, const FinderConfig& cfg) {
  if (std::isinf(p)) return default_product_params(uniform_cube_product(n), a, cfg);
  if (p == 1.0) {
    SimplexScheme s;
    s.n = n;
    s.r = cfg.eps * std::pow(double(n), -0.25);
    s.psi = bump_psi();
    PerturbationScheme out = std::move(s);
    validate_scheme(out, cfg.eps);
    return out;
  }
  if (p <= 2.0) {
    LowPScheme s{LpBall(p, n), 0.0, 0.0, 0.0, bump_psi()};
    s.R1 = std::log(double(n));
    s.R2 = 0.01 * std::pow(s.R1, 1.0 / p);
    const double a_n = a_tilde(p, n);
    const double drift_cap = cfg.eps * s.R1 * std::pow(s.R2, p / 2.0) *
                             std::exp(std::pow(s.R2, p) / std::pow(a_n, p)) /
                             std::sqrt(double(n));
    s.r = std::min(drift_cap, std::pow(double(n), -0.4));
    PerturbationScheme out = std::move(s);
    validate_scheme(out, cfg.eps);
    return out;
  }
  HighPScheme s{LpBall(p, n), 0.0, 0.0, bump_psi()};
  s.R = std::pow(double(n), 1.0 / (2.0 * p + 1.0));
  s.r = cfg.eps * cfg.eps * std::pow(s.R, -0.75) * std::pow(double(n), -0.25);
  PerturbationScheme out = std::move(s);
  validate_scheme(out, cfg.eps);
  return out;
}

namespace {

/// Caches the expensive per-scheme state (the tilted rejection sampler for
/// product schemes) across draws.
struct BaseSampler {
  const PerturbationScheme* scheme;
  std::optional<TiltedComponent> tilt;

  explicit BaseSampler(const PerturbationScheme& s) : scheme(&s) {
    if (const auto* v = std::get_if<ProductScheme>(&s))
      if (v->mu.components.size() == 1 && v->R != 0.0)
        tilt.emplace(v->mu.comp(0), v->phi, v->R);
  }

  BaseDraw draw(RandomStream& stream) const {
    if (tilt) {
      const auto& v = std::get<ProductScheme>(*scheme);
      BaseDraw b;
      b.x.resize(std::size_t(v.mu.n));
      for (double& t : b.x) t = tilt->draw(stream);
      b.delta.resize(std::size_t(v.mu.n));
      for (int& d : b.delta) d = stream.sign();
      return b;
    }
    return draw_base(*scheme, stream);
  }
};

Vec segment_dir(const PerturbationScheme& s, const BaseDraw& b) {
  const Vec y = apply_scheme(s, b, 1.0);
  Vec d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - b.x[i];
  return d;
}

}  // namespace

double pilot_norm_floor(const PerturbationScheme& s, RandomStream& stream, int pilot) {
  const BaseSampler sampler(s);
  std::vector<double> norms;
  norms.reserve(std::size_t(pilot));
  for (int i = 0; i < pilot; ++i) norms.push_back(norm2(segment_dir(s, sampler.draw(stream))));
  return quantile(norms, 0.1);
}

LineCertificate find_long_line(const MembershipSet& set, const PerturbationScheme& scheme,
                               int trials, int u_grid, RandomStream& stream,
                               double norm_floor) {
  if (trials < 1 || u_grid < 16)
    throw std::invalid_argument("find_long_line: need trials >= 1, u_grid >= 16");
  const BaseSampler sampler(scheme);
  if (norm_floor < 0.0) {
    RandomStream pilot_stream = stream.child(0);
    norm_floor = pilot_norm_floor(scheme, pilot_stream, 1000);
  }
  const bool lowp = std::holds_alternative<LowPScheme>(scheme);

  LineCertificate best;
  best.scheme_desc = scheme_text(scheme);
  best.seed = stream.seed();
  best.norm_floor = norm_floor;
  best.degenerate = true;

  RandomStream trial_stream = stream.child(1);
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream ts = trial_stream.child(std::uint64_t(trial));
    BaseDraw b = sampler.draw(ts);
    Vec dir = segment_dir(scheme, b);
    if (lowp) {
      // resample until some pair is inside the bump support
      for (int k = 0; k < 10000 && norm2(dir) == 0.0; ++k) {
        b = sampler.draw(ts);
        dir = segment_dir(scheme, b);
      }
      if (norm2(dir) == 0.0) {
        if (best.degenerate && best.certified_length == 0.0) {
          best.segment = {b.x, Vec(b.x.size(), 0.0), 1.0};
          best.fraction = set.contains(b.x) ? 1.0 : 0.0;
          best.certified_length = 0.0;
        }
        continue;
      }
    }
    const double nd = norm2(dir);
    if (nd < norm_floor || nd == 0.0) continue;

    long hits = 0;
    for (int j = 0; j < u_grid; ++j) {
      const double u = (double(j) + 0.5) / double(u_grid);
      if (set.contains(apply_scheme(scheme, b, u))) ++hits;
    }
    const double fraction = double(hits) / double(u_grid);
    const double cert = fraction * nd;
    if (best.degenerate || cert > best.certified_length) {
      best.segment = {b.x, dir, 1.0};
      best.fraction = fraction;
      best.certified_length = cert;
      best.degenerate = false;
    }
  }
  return best;
}

}  // namespace ll
