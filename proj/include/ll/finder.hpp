#pragma once

#include <cstdint>
#include <string>

#include "ll/linemeasure.hpp"
#include "ll/perturb.hpp"
#include "ll/sets.hpp"

namespace ll {

/// A concrete segment with a measured membership fraction: a replayable
/// lower-bound witness for sup over lines of |line cap set|.
struct LineCertificate {
  Segment segment;                // origin = base point, t in [0, 1]
  double fraction = 0.0;          // fraction of the u-grid inside the set
  double certified_length = 0.0;  // fraction * segment length
  std::string scheme_desc;
  std::uint64_t seed = 0;
  double norm_floor = 0.0;        // discard threshold applied to |dir|
  bool degenerate = false;        // no usable direction was found
};

std::string scheme_text(const PerturbationScheme& s);

struct FinderConfig {
  double eps = 0.05;
  double c_tilde = 1.0;  // constant of the small-a product amplitude
  double c_large = 1.0;  // constant of the large-a product amplitude
};

/// Scheme with the regime's default amplitudes: p = inf -> product over the
/// cube; p = 1 -> simplex; 1 < p <= 2 -> pair scheme; p > 2 -> high-p
/// scheme. Amplitudes follow
///   product:  r = n^{-1/4} / (2 c_tilde)^{1/4}   (a < 1/2)
///             r = c n^{-1/4} |log eps|^{1/4}      (a >= 1/2)
///   high p:   R = n^{1/(2p+1)}, r = eps^2 R^{-3/4} n^{-1/4}
///   pair:     R1 = log n, R2 = 0.01 log^{1/p} n,
///             r = min(eps R1 R2^{p/2} e^{R2^p/a_n^p} n^{-1/2}, n^{-2/5})
///   simplex:  r = eps n^{-1/4}
PerturbationScheme default_params(double p, int n, double a, const FinderConfig& cfg = {});

/// Product scheme over an explicit i.i.d. measure with the product-regime
/// amplitude.
PerturbationScheme default_product_params(const ProductMeasure& mu, double a,
                                          const FinderConfig& cfg = {});

/// 10th percentile of the segment direction norm over pilot draws.
double pilot_norm_floor(const PerturbationScheme& s, RandomStream& stream, int pilot = 1000);

/// Best-of-trials random segment certification: draw a base point and signs,
/// probe the u-grid of perturbation amplitudes, keep the trial with the
/// largest certified length. Trials whose direction norm falls below
/// norm_floor are discarded (norm_floor < 0 runs the pilot).
LineCertificate find_long_line(const MembershipSet& set, const PerturbationScheme& scheme,
                               int trials, int u_grid, RandomStream& stream,
                               double norm_floor = -1.0);

}  // namespace ll
