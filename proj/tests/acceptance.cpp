// Acceptance suite: twelve end-to-end criteria, one printed line each.
// Exit code = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ll/diagnostics.hpp"
#include "ll/finder.hpp"
#include "ll/harness.hpp"
#include "ll/linemeasure.hpp"
#include "ll/perturb.hpp"
#include "ll/samplers.hpp"
#include "ll/sets.hpp"
#include "ll/special.hpp"
#include "ll/stats.hpp"
#include "ll/tilt.hpp"

using namespace ll;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %02d [%s]: %s (%s)\n", id, name.c_str(), ok ? "pass" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

ExperimentConfig ladder_config(const std::string& regime, double p, double a,
                               std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.regime = regime;
  cfg.p = p;
  cfg.a = a;
  cfg.n_list = {64, 128, 256, 512, 1024, 2048, 4096};
  cfg.trials = 200;
  cfg.u_grid = 64;
  cfg.seed = seed;
  cfg.calib_budget = 50000;
  cfg.sup_grid = 512;
  return cfg;
}

std::string fit_text(const ResultRecord& rec) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "lower slope %.3f+-%.3f, upper slope %.3f+-%.3f",
                rec.lower_fit.slope, rec.lower_fit.slope_stderr, rec.upper_fit.slope,
                rec.upper_fit.slope_stderr);
  return buf;
}

// --- criteria 1-4: scaling exponents ---

void criterion_cube() {
  const ResultRecord rec = run_scaling(ladder_config("cube", kInfP, 0.5, 101));
  const bool ok = rec.lower_fit.valid && rec.upper_fit.valid &&
                  std::fabs(rec.lower_fit.slope - 0.25) <= 0.07 &&
                  std::fabs(rec.upper_fit.slope - 0.25) <= 0.07;
  report(1, "cube exponent 1/4", ok, fit_text(rec));
}

void criterion_p4() {
  const ResultRecord rec = run_scaling(ladder_config("lp", 4.0, 0.5, 102));
  const double target = 1.0 / 9.0;  // (p-2)/(4p+2) at p = 4
  const bool ok = rec.lower_fit.valid && rec.upper_fit.valid &&
                  std::fabs(rec.lower_fit.slope - target) <= 0.05 &&
                  std::fabs(rec.upper_fit.slope - target) <= 0.05;
  // Known deviation: the lower certificate is pre-asymptotic at this ladder
  // (active window still in the density tail for n <= 4096); see README.
  report(2, "p=4 exponent 1/9", ok, fit_text(rec));
}

void criterion_p2() {
  const ResultRecord rec = run_scaling(ladder_config("lp", 2.0, 0.5, 103));
  const bool ok = rec.lower_fit.valid && rec.upper_fit.valid &&
                  std::fabs(rec.lower_fit.slope) <= 0.05 &&
                  std::fabs(rec.upper_fit.slope) <= 0.05;
  // Known deviation: same pre-asymptotic transient as the p=4 lower slope.
  report(3, "p=2 flat exponent", ok, fit_text(rec));
}

void criterion_mixture() {
  const ResultRecord rec = run_scaling(ladder_config("mixture", 2.0, 0.5, 104));
  const bool ok = rec.lower_fit.valid && std::fabs(rec.lower_fit.slope - 0.5) <= 0.07;
  report(4, "mixture exponent 1/2", ok, fit_text(rec));
}

// --- criterion 5: linear-in-a law ---
// The a <= 1/2 lower-bound argument fixes one perturbation radius for every a
// and gets linearity from the average witness fraction, so the measured
// quantity is the mean single-trial certificate, not the best-of-trials
// maximum (which saturates at fraction 1 for thick shells).

void criterion_linear_a() {
  const int n = 1024;
  const ProductMeasure mu = gaussian_product(n);
  const PerturbationScheme scheme = default_product_params(mu, 0.25);
  std::vector<double> per_a;
  for (double a : {0.125, 0.25, 0.5}) {
    RandomStream calib = RandomStream(105).child(std::uint64_t(a * 1000.0));
    const MembershipSet shell = product_norm_shell(mu, 1.0 - a, calib, 50000);
    RandomStream fs = RandomStream(106).child(std::uint64_t(a * 1000.0));
    const int runs = 2000;
    double acc = 0.0;
    for (int t = 0; t < runs; ++t) {
      RandomStream rs = fs.child(std::uint64_t(t));
      const LineCertificate cert = find_long_line(shell, scheme, 1, 64, rs, 0.0);
      acc += cert.certified_length;
    }
    per_a.push_back(acc / double(runs) / a);
  }
  const double lo = *std::min_element(per_a.begin(), per_a.end());
  const double hi = *std::max_element(per_a.begin(), per_a.end());
  const bool ok = lo > 0.0 && hi / lo <= 1.2;
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "mean certificate / a at a=1/8,1/4,1/2: %.4g %.4g %.4g (spread %.1f%%)",
                per_a[0], per_a[1], per_a[2], 100.0 * (hi / lo - 1.0));
  report(5, "length linear in a", ok, buf);
}

// --- criterion 6: total variation bounds ---

void criterion_tv() {
  const double tv_g = tv_gaussian_radial(256, 0.5 * std::pow(256.0, -0.25));
  const PerturbationScheme scheme = default_params(3.0, 512, 0.5);
  RandomStream s(107);
  const TvEstimate tv_h = tv_estimate(scheme, 4000, s);
  const bool ok = tv_g < 0.1 && tv_h.tv <= 0.25 + 3.0 * tv_h.stderr_;
  char buf[120];
  std::snprintf(buf, sizeof buf, "gaussian quadrature %.4f < 0.1; high-p MC %.4f+-%.4f <= 0.25",
                tv_g, tv_h.tv, tv_h.stderr_);
  report(6, "TV bounds", ok, buf);
}

// --- criterion 7: density correctness ---

void criterion_density() {
  // (a) 2-D high-p density mass by stratified grid
  const HighPScheme hs{LpBall(3.0, 2), 0.05, 2.0, bump_psi()};
  const double lim = hs.ball.radius + 0.1;
  const long G = 1000;
  RandomStream rs(108);
  double mass = 0.0;
  const double cell = 2.0 * lim / double(G);
  for (long i = 0; i < G; ++i)
    for (long j = 0; j < G; ++j) {
      const Vec y{-lim + (double(i) + rs.uniform()) * cell,
                  -lim + (double(j) + rs.uniform()) * cell};
      mass += density_highp(hs, y);
    }
  mass *= cell * cell;
  const bool ok_mass2 = std::fabs(mass - 1.0) < 1e-3;

  // (b) 1-D perturbed density mass
  const Component comp = gaussian_component();
  const BumpFn phi = bump_phi();
  const double mass1 = gl32_composite(
      [&](double t) { return density_1d_perturbed(comp, 0.3, 0.2, phi, t); }, -9.0, 9.0, 64);
  const bool ok_mass1 = std::fabs(mass1 - 1.0) < 1e-8;

  // (c) Taylor residual ratio ~16 at R = 0
  auto res1 = [&](double r, double t) {
    const double f = density_1d_perturbed(comp, r, 0.0, phi, t);
    return std::fabs(std::log(f) - std::log(comp.density(t)) -
                     0.5 * r * r * g_of(comp, phi, t));
  };
  int in_range = 0;
  for (double t : {0.05, 0.1, 0.15, 0.2})
    if (const double q = res1(0.2, t) / res1(0.1, t); q >= 12.0 && q <= 20.0) ++in_range;
  const bool ok_taylor = in_range >= 3;

  // (d) pair expansion residual: guaranteed cubic decay (>= ~8x per halving);
  // the sign average is even in r, so the measured rate is quartic (~13-16)
  auto res2 = [&](double r, double y1, double y2) {
    const LowPScheme s{LpBall(1.5, 8), r, 3.0, 0.5, bump_psi()};
    const PairMap pm = pair_map(s);
    double acc = 0.0;
    for (int z : {-1, 1}) {
      auto [x1, x2] = invert_pair(pm, y1, y2, z);
      acc += 0.5 / pair_jacobian(pm, x1, x2, z);
    }
    return std::fabs(acc - 1.0 - g_pair(pm, y1, y2));
  };
  const PairMap probe = pair_map(LowPScheme{LpBall(1.5, 8), 0.05, 3.0, 0.5, bump_psi()});
  const double lo = probe.supp_lo(), hi = probe.supp_hi();
  double sum_r = 0.0, sum_half = 0.0;
  for (double u : {0.3, 0.45, 0.6})
    for (double v : {0.35, 0.55}) {
      sum_r += res2(0.04, lo + u * (hi - lo), lo + v * (hi - lo));
      sum_half += res2(0.02, lo + u * (hi - lo), lo + v * (hi - lo));
    }
  const double pair_ratio = sum_r / sum_half;
  const bool ok_pair = pair_ratio >= 6.0 && pair_ratio <= 20.0;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "2-D mass err %.1e, 1-D mass err %.1e, Taylor ratios in-range %d/4, pair ratio %.1f",
                std::fabs(mass - 1.0), std::fabs(mass1 - 1.0), in_range, pair_ratio);
  report(7, "density correctness", ok_mass2 && ok_mass1 && ok_taylor && ok_pair, buf);
}

// --- criterion 8: sampler exactness ---

Vec rejection_ball_draw(double p, int n, RandomStream& s) {
  const double k = kappa(p, n);
  for (;;) {
    Vec x(std::size_t(n), 0.0);
    for (double& t : x) t = s.uniform(-k, k);
    if (lp_norm(x, p) <= k) return x;
  }
}

double grid_pvalue(const std::function<Vec(RandomStream&)>& a,
                   const std::function<Vec(RandomStream&)>& b, double extent, long n_draws,
                   std::uint64_t seed) {
  const int g = 12;
  std::vector<long> ca(g * g, 0), cb(g * g, 0);
  RandomStream sa = RandomStream(seed).child(0), sb = RandomStream(seed).child(1);
  auto bin = [&](const Vec& x, std::vector<long>& c) {
    int i = std::clamp(int((x[0] + extent) / (2.0 * extent) * g), 0, g - 1);
    int j = std::clamp(int((x[1] + extent) / (2.0 * extent) * g), 0, g - 1);
    c[std::size_t(i * g + j)]++;
  };
  for (long k = 0; k < n_draws; ++k) {
    bin(a(sa), ca);
    bin(b(sb), cb);
  }
  return chi2_two_sample_pvalue(ca, cb);
}

void criterion_samplers() {
  const double pv1 = grid_pvalue(
      [](RandomStream& s) { return sample_lp_ball(LpBall(1.0, 2), s); },
      [](RandomStream& s) { return rejection_ball_draw(1.0, 2, s); }, kappa(1.0, 2), 40000,
      109);
  const double pv3 = grid_pvalue(
      [](RandomStream& s) { return sample_lp_ball(LpBall(3.0, 2), s); },
      [](RandomStream& s) { return rejection_ball_draw(3.0, 2, s); }, kappa(3.0, 2), 40000,
      110);
  const double k1 = kappa(1.0, 2);
  auto simplex_oracle = [&](RandomStream& s) {
    for (;;) {
      Vec x{s.uniform(0.0, k1), s.uniform(0.0, k1)};
      if (x[0] + x[1] <= k1) return x;
    }
  };
  const double pvs = grid_pvalue([](RandomStream& s) { return sample_simplex(2, s); },
                                 simplex_oracle, k1, 40000, 111);

  bool moments_ok = true;
  for (double p : {1.5, 2.0, 3.0}) {
    RandomStream s(112 + int(p * 10.0));
    const long N = 200000;
    std::vector<double> m;
    m.reserve(N);
    for (long i = 0; i < N; ++i) m.push_back(std::pow(std::fabs(sample_exp_power(p, s)), p));
    const MeanStderr mm = mean_stderr(m);
    double var = 0.0, m4 = 0.0;
    for (double v : m) {
      const double d = v - mm.mean;
      var += d * d;
      m4 += d * d * d * d;
    }
    var /= double(N - 1);
    m4 /= double(N);
    const double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / double(N));
    if (std::fabs(mm.mean - 1.0 / p) > 3.0 * mm.stderr_) moments_ok = false;
    if (std::fabs(var - 1.0 / p) > 3.0 * se_var) moments_ok = false;
  }
  const bool ok = pv1 > 1e-3 && pv3 > 1e-3 && pvs > 1e-3 && moments_ok;
  char buf[140];
  std::snprintf(buf, sizeof buf, "chi2 p-values B1 %.3g, B3 %.3g, simplex %.3g; moments %s",
                pv1, pv3, pvs, moments_ok ? "within 3 sigma" : "OUT OF RANGE");
  report(8, "sampler exactness", ok, buf);
}

// --- criterion 9: variance law ---

void criterion_variance() {
  bool ok = true;
  std::string detail;
  for (double p : {1.0, 4.0, kInfP}) {
    CheckParams pr;
    pr.p = p;
    pr.n = 4096;
    pr.budget = 20000;
    pr.seed = 113 + std::uint64_t(p == 4.0) + 2 * std::uint64_t(std::isinf(p));
    const CheckReport r = check_claim("var_norm", pr);
    if (r.verdict != Verdict::pass) ok = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "p=%s: %s; ", std::isinf(p) ? "inf" : (p == 1.0 ? "1" : "4"),
                  verdict_name(r.verdict));
    detail += buf;
  }
  report(9, "variance formula", ok, detail);
}

// --- criterion 10: claim suite ---

void criterion_verify_all() {
  const std::vector<CheckReport> reports = verify_all(1, 100);
  int fails = 0, inconclusive = 0;
  for (const CheckReport& r : reports) {
    if (r.verdict == Verdict::fail) ++fails;
    if (r.verdict == Verdict::inconclusive) ++inconclusive;
  }
  char buf[100];
  std::snprintf(buf, sizeof buf, "%zu checks: %d fail, %d inconclusive", reports.size(), fails,
                inconclusive);
  report(10, "claim suite", fails == 0, buf);
}

// --- criterion 11: shell upper-bound constants ---

void criterion_shell_constants() {
  auto scan = [&](const std::function<MembershipSet(int, RandomStream&)>& make, double rate_exp,
                  std::uint64_t seed, std::vector<double>& consts) {
    for (int n : {64, 256, 1024}) {
      RandomStream calib = RandomStream(seed).child(std::uint64_t(n));
      const MembershipSet set = make(n, calib);
      RandomStream ss = RandomStream(seed + 1).child(std::uint64_t(n));
      SupLineParams sp;
      sp.grid = 512;
      const SupLineResult r = sup_line_search(set, ss, sp);
      consts.push_back(r.length / std::pow(double(n), rate_exp));
    }
  };
  std::vector<double> c_cube, c_hybrid;
  scan(
      [](int n, RandomStream& s) {
        return product_norm_shell(uniform_cube_product(n), 0.5, s, 50000);
      },
      0.25, 114, c_cube);
  scan(
      [](int n, RandomStream& s) {
        const HybridCalibration cal = calibrate_hybrid_shell(4.0, n, 0.5, s, 50000);
        return hybrid_shell(4.0, n, cal.C0, cal.E);
      },
      1.0 / 9.0, 116, c_hybrid);
  auto spread = [](const std::vector<double>& c) {
    return *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end());
  };
  const double s1 = spread(c_cube), s2 = spread(c_hybrid);
  const bool ok = s1 < 1.25 && s2 < 1.25;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "cube consts %.3f/%.3f/%.3f (spread %.1f%%), hybrid %.3f/%.3f/%.3f (%.1f%%)",
                c_cube[0], c_cube[1], c_cube[2], 100.0 * (s1 - 1.0), c_hybrid[0], c_hybrid[1],
                c_hybrid[2], 100.0 * (s2 - 1.0));
  report(11, "shell sup-line constants", ok, buf);
}

// --- criterion 12: striped shell and super-additivity ---

void criterion_striped() {
  RandomStream calib(117);
  const double lambda = 0.5, eps = 0.02, delta = 1e-4;
  const MembershipSet b = striped_cube_shell(2, lambda, eps, delta, calib, 50000);
  RandomStream s(118);
  const MeanStderr m = mc_mass(b, 50000, s);
  const bool ok_vol = m.mean > 0.5 - eps - 3.0 * m.stderr_;

  bool ok_lines = true;
  RandomStream ls(119);
  for (int k = 0; k < 1000; ++k) {
    const Vec o{ls.uniform(1.0, 2.0), ls.uniform(1.0, 2.0)};
    const double th = ls.uniform(0.0, M_PI);
    const Line l{o, {std::cos(th), std::sin(th)}};
    const double inter = total_length(b.intersector(l));
    const auto q = box_line_interval(l, 1.0, 2.0);
    if (inter > lambda * (q ? q->len() : 0.0) + 0.02 + 1e-9) ok_lines = false;
  }

  // super-additivity pattern: lower_len(a) <= 4 a upper_len(1/2), cube n=256
  const int n = 256;
  const ProductMeasure mu = uniform_cube_product(n);
  RandomStream ch(120);
  const MembershipSet half = product_norm_shell(mu, 0.5, ch, 50000);
  RandomStream su(121);
  SupLineParams sp;
  sp.grid = 512;
  const double upper_half = sup_line_search(half, su, sp).length;
  bool ok_super = true;
  std::string super_detail;
  for (double a : {0.125, 0.25}) {
    RandomStream ca = RandomStream(122).child(std::uint64_t(a * 1000.0));
    const MembershipSet seta = product_norm_shell(mu, 1.0 - a, ca, 50000);
    RandomStream fa = RandomStream(123).child(std::uint64_t(a * 1000.0));
    const LineCertificate cert =
        find_long_line(seta, default_params(kInfP, n, a), 100, 64, fa);
    if (cert.certified_length > 4.0 * a * upper_half) ok_super = false;
    char sb[48];
    std::snprintf(sb, sizeof sb, "a=%g: %.3f<=%.3f ", a, cert.certified_length,
                  4.0 * a * upper_half);
    super_detail += sb;
  }

  char buf[220];
  std::snprintf(buf, sizeof buf, "vol %.4f+-%.4f, lines %s, %s", m.mean, m.stderr_,
                ok_lines ? "bounded" : "VIOLATED", super_detail.c_str());
  report(12, "striped shell + super-additivity", ok_vol && ok_lines && ok_super, buf);
}

}  // namespace

int main() {
  criterion_cube();
  criterion_p4();
  criterion_p2();
  criterion_mixture();
  criterion_linear_a();
  criterion_tv();
  criterion_density();
  criterion_samplers();
  criterion_variance();
  criterion_verify_all();
  criterion_shell_constants();
  criterion_striped();
  std::printf("%d of 12 criteria failed\n", g_failures);
  return g_failures;
}
