#pragma once

#include <variant>
#include <vector>

#include "ll/body.hpp"
#include "ll/bump.hpp"
#include "ll/product_measure.hpp"
#include "ll/rng.hpp"
#include "ll/stats.hpp"
#include "ll/tilt.hpp"
#include "ll/vec.hpp"

namespace ll {

// ---- the four perturbation schemes, plus the Gaussian mixture ----

/// Y_i = X_i + r U delta_i phi(X_i), X from the tilted product measure.
struct ProductScheme {
  ProductMeasure mu;
  double r = 0.0;
  double R = 0.0;
  BumpFn phi;
};

/// Y_i = X_i + u phi(X_i) delta_i with phi(x) = r psi(R x), X uniform in
/// B_p^n, p > 2. Validity: n R^3 r^4 <= eps^6 and R^{2p+1} >= n.
struct HighPScheme {
  LpBall ball;
  double r = 0.0;
  double R = 1.0;
  BumpFn psi;
};

/// Pairwise map (Y_{2i-1}, Y_{2i}) = (X_{2i-1}, X_{2i}) + u delta_i
/// h(X_{2i-1}, X_{2i}), X uniform in B_p^n, 1 < p < 2. Validity:
/// 1 <= R2 <= log^{1/p} n, R1 = log n, n R1^-2 r^2 R2^-p e^{-2 R2^p/a^p}
/// <= eps^2, r^5 n^2 <= 1.
struct LowPScheme {
  LpBall ball;
  double r = 0.0;
  double R1 = 1.0;
  double R2 = 1.0;
  BumpFn psi;  // psi2(a, b) = psi(a) psi(b)
};

/// Latent exponentials perturbed, f_i = g_i + u r psi(g_i) delta_i, then
/// renormalized back onto the simplex with the same Z.
struct SimplexScheme {
  int n = 0;
  double r = 0.0;
  BumpFn psi;
};

/// Y = X + u r0 W with X, W independent standard Gaussians.
struct MixtureScheme {
  int n = 0;
  double r0 = 1.0;
};

using PerturbationScheme =
    std::variant<ProductScheme, HighPScheme, LowPScheme, SimplexScheme, MixtureScheme>;

int scheme_dim(const PerturbationScheme& s);
/// number of sign variables: n (Product, HighP, Simplex), floor(n/2) (LowP),
/// 0 (Mixture)
int delta_count(const PerturbationScheme& s);

/// Throws unless the scheme's validity constraints hold (with tolerance eps
/// where the constraint involves it).
void validate_scheme(const PerturbationScheme& s, double eps = 0.05);

/// Base point plus every latent needed to redo or undo the perturbation.
struct BaseDraw {
  Vec x;                   // the unperturbed point
  std::vector<int> delta;  // +-1 signs
  Vec g;                   // Simplex: latent exponentials; Mixture: direction W
  double z = 0.0;          // Simplex: the extra exp(1)
};

BaseDraw draw_base(const PerturbationScheme& s, RandomStream& stream);

/// The perturbed point at amplitude scaling u in [0, 1] (u multiplies r).
Vec apply_scheme(const PerturbationScheme& s, const BaseDraw& b, double u);

/// Recovers the base point from y given the latents (delta, and z for the
/// simplex); monotone bisection per coordinate, damped fixed point for the
/// pair map.
Vec invert_scheme(const PerturbationScheme& s, const Vec& y, const BaseDraw& latents, double u);

// ---- one-dimensional perturbed density ----

/// Density of y = x + r delta phi(x), delta = +-1 fair, x from the tilted
/// law kappa_R e^{-R^2 g} rho:
/// f(t) = [rho~(x1)/(1 + r phi'(x1)) + rho~(x2)/(1 - r phi'(x2))] / 2 with
/// x1 + r phi(x1) = t = x2 - r phi(x2).
double density_1d_perturbed(const TiltedComponent& tilt, double r, double t);
double density_1d_perturbed(const Component& comp, double r, double R, const BumpFn& phi,
                            double t);

// ---- high-p density ----

/// phi(x) = r psi(R x) and its derivatives for a HighPScheme.
double highp_phi(const HighPScheme& s, double x, int order = 0);
/// g(t) = (phi^2 / 2)'' — the second-order term of E[(1 + phi' delta)^{-1}].
double g_highp(const HighPScheme& s, double t);

/// Indices i with y_i in [1/R - r, 2/R + r], where the inverse coordinate
/// map can differ from the identity.
std::vector<int> highp_active_set(const HighPScheme& s, const Vec& y);

/// Density of Y = X + phi(X) delta at y. mc_samples = 0: exact enumeration
/// over the 2^|I| sign patterns (throws when |I| > 24); otherwise MC over
/// delta with the given substream.
double density_highp(const HighPScheme& s, const Vec& y, long mc_samples = 0,
                     RandomStream* stream = nullptr);

// ---- low-p pair machinery ----

/// h(x1, x2) = phi(x1, x2) (x1^{1-p}, -x2^{1-p}),
/// phi(x1, x2) = r psi(R1 (x1 - R2)) psi(R1 (x2 - R2)); analytic partials
/// to order 2 via jets.
struct PairMap {
  double p, r, R1, R2;
  BumpFn psi;
  double supp_lo() const { return R2 + 1.0 / R1; }
  double supp_hi() const { return R2 + 2.0 / R1; }
  /// jets of h1 and h2 at (x1, x2); .v is the value
  Jet2 h1(double x1, double x2) const;
  Jet2 h2(double x1, double x2) const;
};

PairMap pair_map(const LowPScheme& s);

/// det of the differential of (w1, w2) -> (w1, w2) + z h(w1, w2)
double pair_jacobian(const PairMap& pm, double w1, double w2, int z);

/// (1/2) d2(h1^2)/dy1^2 + d2(h1 h2)/dy1 dy2 + (1/2) d2(h2^2)/dy2^2
double g_pair(const PairMap& pm, double y1, double y2);

/// Inverts (x1, x2) + z h(x1, x2) = (y1, y2) by damped fixed point.
std::pair<double, double> invert_pair(const PairMap& pm, double y1, double y2, int z);

/// Density of the pair-perturbed uniform ball point at y; MC over delta.
double density_lowp(const LowPScheme& s, const Vec& y, long mc_samples,
                    RandomStream* stream);

// ---- total variation ----

struct TvEstimate {
  double tv = 0.0;       // density_term + escape_term
  double stderr_ = 0.0;
  double density_term = 0.0;  // (1/2) E_X |f(X)/base(X) - 1|
  double escape_term = 0.0;   // (1/2) P(Y outside the base support)
  double escape_stderr = 0.0;
  long n_samples = 0;
};

/// d_TV(X, Y) estimated from the scheme's computable density:
/// Product/Simplex via U-mixed products of 1-D perturbed densities,
/// HighP/LowP via MC densities on the ball, Mixture via exact radial
/// quadrature (stderr 0).
TvEstimate tv_estimate(const PerturbationScheme& s, long n_samples, RandomStream& stream);

/// Exact d_TV(N(0, I_n), N(0, (1+r^2) I_n)) by radial quadrature.
double tv_gaussian_radial(int n, double r);

/// U-mixed product density evaluator for Product/Simplex schemes, cached on
/// a fine grid per Gauss-Legendre node so MC evaluation is O(n) per point.
class ProductDensity {
 public:
  ProductDensity(const Component& comp, double r, double R, const BumpFn& phi,
                 int grid_points = 4001);
  /// log of f_mixed(y) / prod rho(y_i), f_mixed(y) = int_0^1 prod f^{(ru)}(y_i) du
  double log_ratio(const Vec& y) const;
  /// the 1-D density at a single u (no mixing), from the cache
  double density_at(double t, int u_node) const;
  const TiltedComponent& tilt() const { return tilt_; }

 private:
  const Component* comp_;
  double r_;
  TiltedComponent tilt_;
  double cache_lo_, cache_hi_, cache_dt_;
  // log f^{(r u_k)} - log rho on the cache grid, one row per GL node
  std::vector<std::vector<double>> log_ratio_cache_;
  double log_ratio_1d(double t, int u_node) const;
};

}  // namespace ll
