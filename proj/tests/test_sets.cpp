#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ll/linemeasure.hpp"
#include "ll/samplers.hpp"
#include "ll/sets.hpp"
#include "ll/special.hpp"

using namespace ll;

TEST_CASE("ball shell construction has volume 1 - (1 - 1/n)^n") {
  const int n = 10;
  const MembershipSet shell = ball_shell_construction(n);
  RandomStream s(1);
  const MeanStderr m = mc_mass(shell, 200000, s);
  const double closed = 1.0 - std::pow(1.0 - 1.0 / double(n), n);  // 0.6513...
  CHECK(closed == doctest::Approx(0.6513215599).epsilon(1e-9));
  CHECK(std::fabs(m.mean - closed) < 3.5 * m.stderr_);
}

TEST_CASE("sphere chord closed form") {
  // line through the origin: chord length 2 rho
  Line l{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  auto c = sphere_chord(l, 2.0);
  REQUIRE(c.has_value());
  CHECK(c->len() == doctest::Approx(4.0).epsilon(1e-12));
  // offset line: chord 2 sqrt(rho^2 - d^2)
  Line l2{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
  auto c2 = sphere_chord(l2, 2.0);
  REQUIRE(c2.has_value());
  CHECK(c2->len() == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  // miss
  Line l3{{0.0, 3.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK(!sphere_chord(l3, 2.0).has_value());
}

TEST_CASE("shell line intervals") {
  Line l{{0.0, 0.5, 0.0}, {1.0, 0.0, 0.0}};
  const IntervalList iv = shell_line_intervals(l, 1.0, 2.0);
  // two symmetric pieces, each sqrt(4 - 1/4) - sqrt(1 - 1/4) long
  const double want = std::sqrt(3.75) - std::sqrt(0.75);
  CHECK(total_length(iv) == doctest::Approx(2.0 * want).epsilon(1e-12));
  CHECK(iv.size() == 2);
}

TEST_CASE("box line interval") {
  Line l{{0.5, 0.5}, {1.0, 1.0}};
  auto iv = box_line_interval(l, 0.0, 1.0);
  REQUIRE(iv.has_value());
  // t in [-0.5, 0.5] keeps both coordinates inside [0, 1]
  CHECK(iv->len() == doctest::Approx(1.0).epsilon(1e-12));
  auto sym = sym_box_line_interval(Line{{0.0, 0.0}, {0.0, 2.0}}, 1.0);
  REQUIRE(sym.has_value());
  CHECK(sym->len() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convex sublevel crossing") {
  // f(t) = (t - 3)^2, level 4 -> [1, 5]
  auto iv = convex_sublevel([](double t) { return (t - 3.0) * (t - 3.0); }, 4.0, 0.0, 1.0);
  REQUIRE(iv.has_value());
  CHECK(iv->lo == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(iv->hi == doctest::Approx(5.0).epsilon(1e-8));
  // level below the minimum: empty
  CHECK(!convex_sublevel([](double t) { return t * t + 2.0; }, 1.0, 0.0, 1.0).has_value());
}

TEST_CASE("product norm shell captures the target mass") {
  RandomStream calib(3);
  for (double eps : {0.5, 0.25}) {
    const ProductMeasure mu = uniform_cube_product(64);
    const MembershipSet shell = product_norm_shell(mu, eps, calib, 50000);
    RandomStream s(4);
    const MeanStderr m = mc_mass(shell, 50000, s);
    CHECK(m.mean > 1.0 - eps - 4.0 * m.stderr_ - 0.02);
    CHECK(m.mean < 1.0 - eps + 4.0 * m.stderr_ + 0.02);
  }
}

TEST_CASE("product norm shell intersector agrees with membership scans") {
  RandomStream calib(5);
  const ProductMeasure mu = gaussian_product(16);
  const MembershipSet shell = product_norm_shell(mu, 0.5, calib, 30000);
  REQUIRE(shell.has_intersector());
  RandomStream s(6);
  for (int k = 0; k < 20; ++k) {
    Vec o(16, 0.0), d(16, 0.0);
    for (auto& t : o) t = s.normal();
    for (auto& t : d) t = s.normal();
    const Line l{o, d};
    const IntervalList iv = shell.intersector(l);
    // pointwise agreement between the intervals and the membership oracle,
    // away from interval boundaries
    auto in_iv = [&](double t) {
      for (const Interval& itv : iv)
        if (t >= itv.lo && t <= itv.hi) return true;
      return false;
    };
    auto near_boundary = [&](double t) {
      for (const Interval& itv : iv)
        if (std::fabs(t - itv.lo) < 1e-6 || std::fabs(t - itv.hi) < 1e-6) return true;
      return false;
    };
    std::vector<double> probes;
    for (int i = -40; i <= 40; ++i) probes.push_back(0.1 * i);
    for (const Interval& itv : iv) probes.push_back(0.5 * (itv.lo + itv.hi));
    for (double t : probes) {
      if (near_boundary(t)) continue;
      CHECK(shell.contains(axpy(o, t, d)) == in_iv(t));
    }
  }
}

TEST_CASE("lp shell calibration hits the target mass") {
  const double p = 1.5;
  const int n = 64;
  RandomStream calib(7);
  const double c0 = calibrate_lp_shell(p, n, 0.5, calib, 50000);
  const MembershipSet shell = lp_shell(p, n, c0);
  RandomStream s(8);
  const MeanStderr m = mc_mass(shell, 50000, s);
  CHECK(std::fabs(m.mean - 0.5) < 0.03);
}

TEST_CASE("lp shell intersector matches membership") {
  const double p = 1.5;
  const int n = 16;
  RandomStream calib(9);
  const double c0 = calibrate_lp_shell(p, n, 0.5, calib, 30000);
  const MembershipSet shell = lp_shell(p, n, c0);
  REQUIRE(shell.has_intersector());
  RandomStream s(10);
  const LpBall ball(p, n);
  int nontrivial = 0;
  for (int k = 0; k < 30; ++k) {
    Vec o = sample_lp_ball(ball, s);
    Vec d(std::size_t(n), 0.0);
    for (auto& t : d) t = s.normal();
    const Line l{o, d};
    const IntervalList iv = shell.intersector(l);
    if (!iv.empty()) ++nontrivial;
    for (double t : {-0.2, -0.05, 0.0, 0.01, 0.05, 0.2}) {
      const Vec x = axpy(o, t, d);
      bool in_iv = false;
      for (const Interval& itv : iv)
        if (t >= itv.lo - 1e-9 && t <= itv.hi + 1e-9) in_iv = true;
      if (shell.contains(x)) CHECK(in_iv);
    }
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("hybrid profile shape") {
  const HybridProfile h(4.0, 256);
  // quadratic branch below the breakpoint, |r|^p branch above; continuous
  const double b = h.breakpoint;
  CHECK(h.value(b * 0.999) == doctest::Approx(h.value(b * 1.001)).epsilon(1e-2));
  CHECK(h.value(2.0 * b) == doctest::Approx(std::pow(2.0 * b, 4.0)).epsilon(1e-12));
  // derivative continuous at the breakpoint
  CHECK(h.deriv(b * 0.999) == doctest::Approx(h.deriv(b * 1.001)).epsilon(1e-2));
}

TEST_CASE("hybrid shell calibration hits the target mass") {
  const double p = 4.0;
  const int n = 64;
  RandomStream calib(11);
  const HybridCalibration cal = calibrate_hybrid_shell(p, n, 0.5, calib, 50000);
  const MembershipSet shell = hybrid_shell(p, n, cal.C0, cal.E);
  RandomStream s(12);
  const MeanStderr m = mc_mass(shell, 50000, s);
  CHECK(std::fabs(m.mean - 0.5) < 0.03);
}

TEST_CASE("striped cube shell: volume and line bound in the plane") {
  RandomStream calib(13);
  const double lambda = 0.5, eps = 0.02, delta = 1e-4;
  const MembershipSet b = striped_cube_shell(2, lambda, eps, delta, calib, 50000);
  RandomStream s(14);
  const MeanStderr m = mc_mass(b, 50000, s);
  CHECK(m.mean > 0.5 - eps - 3.0 * m.stderr_);
  // |line cap B| <= lambda |line cap Q| + 0.02 on random lines
  REQUIRE(b.has_intersector());
  RandomStream ls(15);
  for (int k = 0; k < 200; ++k) {
    Vec o{ls.uniform(1.0, 2.0), ls.uniform(1.0, 2.0)};
    const double th = ls.uniform(0.0, M_PI);
    Vec d{std::cos(th), std::sin(th)};
    const Line l{o, d};
    const double inter = total_length(b.intersector(l));
    const auto q = box_line_interval(l, 1.0, 2.0);
    const double cube_len = q ? q->len() : 0.0;
    CHECK(inter <= lambda * cube_len + 0.02 + 1e-9);
  }
}

TEST_CASE("euclidean ball set membership and chords") {
  const MembershipSet ball = euclidean_ball_set(3, 2.0);
  CHECK(ball.contains({1.0, 1.0, 1.0}));
  CHECK(!ball.contains({2.0, 2.0, 2.0}));
  REQUIRE(ball.has_intersector());
  const IntervalList iv = ball.intersector(Line{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  CHECK(total_length(iv) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("descriptors are replayable text") {
  const MembershipSet shell = ball_shell_construction(5);
  CHECK(shell.desc.to_text().find("ball_shell") != std::string::npos);
  CHECK(shell.n == 5);
}
