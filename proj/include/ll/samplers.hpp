#pragma once

#include "ll/body.hpp"
#include "ll/bump.hpp"
#include "ll/product_measure.hpp"
#include "ll/rng.hpp"
#include "ll/vec.hpp"

namespace ll {

/// One draw with density e^{-|t|^p} / (2 Gamma(1+1/p)).
double sample_exp_power(double p, RandomStream& stream);

/// Uniform point in B_p^n via the exponential-power representation
/// X = kappa (g_1..g_n) / (sum |g_i|^p + Z)^{1/p}; coordinate-wise uniforms
/// for p = inf.
Vec sample_lp_ball(const LpBall& ball, RandomStream& stream);

/// n independent coordinate draws.
Vec sample_product(const ProductMeasure& mu, RandomStream& stream);

/// Coordinates with the tilted densities kappa_{i,R} e^{-R^2 g_i} rho_i,
/// g_i = (phi^2 rho_i)'' / rho_i, by rejection against rho_i.
Vec sample_tilted_product(const ProductMeasure& mu, double R, const BumpFn& phi,
                          RandomStream& stream);

/// X + U Y with X, Y independent standard Gaussians and U uniform in [0,1].
Vec sample_gaussian_mixture(int n, RandomStream& stream);

/// Uniform point in the simplex Delta^n = B_1^n intersect {x_i >= 0}.
Vec sample_simplex(int n, RandomStream& stream);

/// Latent representation of a simplex draw (kept so perturbations can reuse
/// the same exponentials).
struct SimplexDraw {
  Vec g;       // exp(1) draws
  double z;    // extra exp(1)
  Vec x;       // the simplex point
};
SimplexDraw sample_simplex_latent(int n, RandomStream& stream);

}  // namespace ll
