#include "ll/samplers.hpp"

#include <cmath>

#include "ll/tilt.hpp"

namespace ll {

double sample_exp_power(double p, RandomStream& stream) {
  // |g|^p ~ Gamma(1/p), so g = sign * Gamma(1/p)^{1/p}
  double g = stream.gamma(1.0 / p);
  return stream.sign() * std::pow(g, 1.0 / p);
}

Vec sample_lp_ball(const LpBall& ball, RandomStream& stream) {
  Vec x(std::size_t(ball.n));
  if (std::isinf(ball.p)) {
    for (auto& v : x) v = stream.uniform() - 0.5;
    return x;
  }
  double s = 0.0;
  for (auto& v : x) {
    v = sample_exp_power(ball.p, stream);
    s += std::pow(std::fabs(v), ball.p);
  }
  double z = stream.exponential();
  double scale = ball.radius / std::pow(s + z, 1.0 / ball.p);
  for (auto& v : x) v *= scale;
  return x;
}

Vec sample_product(const ProductMeasure& mu, RandomStream& stream) {
  Vec x(std::size_t(mu.n));
  for (int i = 0; i < mu.n; ++i) x[std::size_t(i)] = mu.comp(i).draw(stream);
  return x;
}

Vec sample_tilted_product(const ProductMeasure& mu, double R, const BumpFn& phi,
                          RandomStream& stream) {
  if (std::fabs(R) > 1.0) throw std::invalid_argument("sample_tilted_product: |R| > 1");
  Vec x(std::size_t(mu.n));
  if (mu.components.size() == 1) {
    TiltedComponent tc(mu.components[0], phi, R);
    for (auto& v : x) v = tc.draw(stream);
    return x;
  }
  for (int i = 0; i < mu.n; ++i) {
    TiltedComponent tc(mu.comp(i), phi, R);
    x[std::size_t(i)] = tc.draw(stream);
  }
  return x;
}

Vec sample_gaussian_mixture(int n, RandomStream& stream) {
  Vec x(std::size_t(n), 0.0);
  double u = stream.uniform();
  for (auto& v : x) v = stream.normal() + u * stream.normal();
  return x;
}

SimplexDraw sample_simplex_latent(int n, RandomStream& stream) {
  SimplexDraw d;
  d.g.resize(std::size_t(n), 0.0);
  double sum = 0.0;
  for (auto& g : d.g) {
    g = stream.exponential();
    sum += g;
  }
  d.z = stream.exponential();
  double scale = factorial_root(n) / (2.0 * (d.z + sum));
  d.x.resize(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) d.x[std::size_t(i)] = scale * d.g[std::size_t(i)];
  return d;
}

Vec sample_simplex(int n, RandomStream& stream) {
  return sample_simplex_latent(n, stream).x;
}

}  // namespace ll
