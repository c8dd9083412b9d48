#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ll/body.hpp"
#include "ll/product_measure.hpp"
#include "ll/rng.hpp"
#include "ll/stats.hpp"
#include "ll/vec.hpp"

namespace ll {

/// Structured record of what a set is, so experiments are replayable.
struct Descriptor {
  std::string kind;
  std::vector<std::pair<std::string, double>> params;
  void add(const std::string& k, double v) { params.emplace_back(k, v); }
  std::string to_text() const {
    std::ostringstream os;
    os << kind;
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    return os.str();
  }
};

/// A measurable subset: membership oracle, sampler for the ambient measure,
/// and an exact line intersector where the geometry permits.
struct MembershipSet {
  std::function<bool(const Vec&)> contains;
  std::function<Vec(RandomStream&)> ambient;
  std::function<IntervalList(const Line&)> intersector;  // may be empty
  Descriptor desc;
  int n = 0;
  double scale = 1.0;  // typical spatial extent, a hint for searchers
  bool has_intersector() const { return bool(intersector); }
};

/// Fraction of ambient draws landing inside the set.
MeanStderr mc_mass(const MembershipSet& set, long samples, RandomStream& stream);

// ---- intersector building blocks ----

/// t-interval where |origin + t dir|_2 <= rho (empty if the line misses).
std::optional<Interval> sphere_chord(const Line& l, double rho);

/// {t : r_lo <= |origin + t dir| <= r_hi}, at most two intervals.
IntervalList shell_line_intervals(const Line& l, double r_lo, double r_hi);

/// t-interval where origin + t dir stays in the cube [lo, hi]^n.
std::optional<Interval> box_line_interval(const Line& l, double lo, double hi);

/// t-interval where every |origin_i + t dir_i| <= m.
std::optional<Interval> sym_box_line_interval(const Line& l, double m);

/// Sublevel {t : f(t) <= level} of a convex coercive f along the line,
/// located by golden-section descent plus bisection to ~1e-10 relative.
std::optional<Interval> convex_sublevel(const std::function<double(double)>& f, double level,
                                        double t_hint, double step_hint);

// ---- extremal witness sets ----

/// {x : r_lo <= |x|_2 <= r_hi}; ambient uniform in the ball of radius r_hi.
MembershipSet euclidean_shell(int n, double r_lo, double r_hi);

/// K \ (1 - 1/n) K for K the Euclidean ball of volume one.
MembershipSet ball_shell_construction(int n);

/// Euclidean shell E +- C_hat sqrt(|log eps|) capturing mass >= 1 - eps of
/// the product measure; E and C_hat calibrated by MC.
MembershipSet product_norm_shell(const ProductMeasure& mu, double eps, RandomStream& stream,
                                 long budget = 100000);

struct LpShellConstants { double C0; };
/// {x in B_p^n : |x|_p^p >= kappa^p - C0} intersected with
/// {max |x_i| <= C0 log^{1/p} n}, 1 < p <= 2.
MembershipSet lp_shell(double p, int n, double C0);
double calibrate_lp_shell(double p, int n, double target_mass, RandomStream& stream,
                          long budget = 100000);

/// Quadratic-near-zero / |r|^p-far profile of the p > 2 shell.
struct HybridProfile {
  double p;
  int n;
  double breakpoint;  // n^{-1/(2p+1)}
  double quad_coef;   // (p/2) n^{(2-p)/(2p+1)}
  double quad_const;  // (1 - p/2) n^{-p/(2p+1)}
  HybridProfile(double p_, int n_);
  double value(double r) const;
  double deriv(double r) const;
};

/// {x in B_p^n : |sum h(x_i) - E| <= C0}, p > 2.
MembershipSet hybrid_shell(double p, int n, double C0, double E);
struct HybridCalibration { double C0; double E; };
HybridCalibration calibrate_hybrid_shell(double p, int n, double target_mass,
                                         RandomStream& stream, long budget = 100000);

/// The striped union of spherical shells inside the cube [1,2]^n; keeps a
/// lambda-fraction of delta-wide radius classes, residue chosen by MC volume.
MembershipSet striped_cube_shell(int n, double lambda, double eps, double delta,
                                 RandomStream& stream, long budget = 100000);

/// {|x|_2 <= radius}; optional ambient sampler (defaults to uniform in the ball).
MembershipSet euclidean_ball_set(int n, double radius,
                                 std::function<Vec(RandomStream&)> ambient = nullptr);

/// Full ambient space / empty set, for harness plumbing and tests.
MembershipSet full_space(int n, std::function<Vec(RandomStream&)> ambient);
MembershipSet cube_set(int n, double half_width);

}  // namespace ll
