#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ll/bump.hpp"
#include "ll/product_measure.hpp"
#include "ll/quad.hpp"

namespace ll {

/// g = (phi^2 rho)'' / rho, expanded as
/// (phi^2)'' + 2 (phi^2)' (log rho)' + phi^2 ((log rho)'' + ((log rho)')^2).
/// Vanishes outside the support of phi.
inline double g_of(const Component& comp, const BumpFn& phi, double t) {
  if (t <= phi.lo || t >= phi.hi) return 0.0;
  if (comp.density(t) <= 0.0)
    throw std::domain_error("g_of: density vanishes inside the bump support");
  double f = phi.eval(t, 0), f1 = phi.eval(t, 1), f2 = phi.eval(t, 2);
  double l1 = comp.log_density_deriv(t, 1), l2 = comp.log_density_deriv(t, 2);
  double sq2 = 2.0 * (f1 * f1 + f * f2);  // (phi^2)''
  double sq1 = 2.0 * f * f1;              // (phi^2)'
  return sq2 + 2.0 * sq1 * l1 + f * f * (l2 + l1 * l1);
}

/// Tilted coordinate law kappa_R e^{-R^2 g} rho, with the normalizer from
/// quadrature and the grid-scanned bound max |g| used as rejection envelope.
struct TiltedComponent {
  const Component* comp;
  const BumpFn* phi;
  double R;
  double g_max = 0.0;     // max |g| over the bump support
  double log_kappa = 0.0; // log of the normalizer kappa_R

  TiltedComponent(const Component& c, const BumpFn& ph, double R_)
      : comp(&c), phi(&ph), R(R_) {
    const int grid = 10000;
    for (int i = 1; i < grid; ++i) {
      double t = ph.lo + (ph.hi - ph.lo) * double(i) / grid;
      g_max = std::max(g_max, std::fabs(g_of(c, ph, t)));
    }
    // kappa^-1 = 1 + int_{supp phi} (e^{-R^2 g} - 1) rho
    double corr = gl32_composite(
        [&](double t) { return (std::exp(-R * R * g_of(c, ph, t)) - 1.0) * c.density(t); },
        ph.lo, ph.hi, 8);
    log_kappa = -std::log1p(corr);
  }

  double g(double t) const { return g_of(*comp, *phi, t); }
  double density(double t) const {
    return std::exp(log_kappa - R * R * g(t)) * comp->density(t);
  }
  /// normalizer kappa_R itself
  double kappa_R() const { return std::exp(log_kappa); }

  /// one rejection draw; throws after max_tries failures
  double draw(RandomStream& s, long max_tries = 1000000) const {
    const double log_env = R * R * g_max;
    for (long k = 0; k < max_tries; ++k) {
      double t = comp->draw(s);
      double log_accept = -R * R * g(t) - log_env;
      if (std::log(s.uniform_open()) < log_accept) return t;
    }
    throw std::runtime_error("tilted rejection sampler: acceptance too low (malformed g?)");
  }
};

}  // namespace ll
