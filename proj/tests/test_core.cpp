#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ll/bump.hpp"
#include "ll/jet.hpp"
#include "ll/quad.hpp"
#include "ll/rng.hpp"
#include "ll/special.hpp"
#include "ll/stats.hpp"
#include "ll/vec.hpp"

using namespace ll;

TEST_CASE("kappa closed forms") {
  CHECK(kappa(kInfP, 7) == doctest::Approx(0.5).epsilon(1e-15));
  // volume-one disk: pi r^2 = 1
  CHECK(kappa(2.0, 2) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  // ell_1 ball volume 2^n / n!
  CHECK(kappa(1.0, 3) == doctest::Approx(std::cbrt(6.0) / 2.0).epsilon(1e-12));
  // general n: 2^n kappa^n / (n! / prod...) via direct volume identity at p=2, n=3:
  // (4/3) pi r^3 = 1
  CHECK(kappa(2.0, 3) == doctest::Approx(std::cbrt(3.0 / (4.0 * M_PI))).epsilon(1e-12));
}

TEST_CASE("a_tilde and its limit") {
  // a_n -> e^{-1/p} / (2 Gamma(1 + 1/p))
  for (double p : {1.0, 2.0, 4.0}) {
    const double lim = a_tilde_limit(p);
    CHECK(a_tilde(p, 2000000) == doctest::Approx(lim).epsilon(1e-4));
  }
  CHECK(a_tilde_limit(1.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("factorial_root") {
  CHECK(factorial_root(1) == doctest::Approx(1.0));
  CHECK(factorial_root(4) == doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-13));
}

TEST_CASE("incomplete gamma vs erf") {
  // P(1/2, x) = erf(sqrt(x))
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0})
    CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  CHECK(chi2_pvalue(0.0, 5.0) == doctest::Approx(1.0));
  // chi2 with 2 dof is exponential(1/2): P(stat > s) = e^{-s/2}
  CHECK(chi2_pvalue(3.0, 2.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
}

TEST_CASE("interval algebra") {
  IntervalList a{{0.0, 2.0}, {3.0, 5.0}};
  IntervalList b{{1.0, 4.0}};
  const IntervalList both = intersect_intervals(a, b);
  CHECK(total_length(both) == doctest::Approx(2.0));
  const IntervalList diff = subtract_intervals(a, b);
  CHECK(total_length(diff) == doctest::Approx(2.0));
  const IntervalList clipped = clip_intervals(a, 1.5, 10.0);
  CHECK(total_length(clipped) == doctest::Approx(2.5));
}

TEST_CASE("vector helpers") {
  const Vec x{3.0, 4.0};
  CHECK(norm2(x) == doctest::Approx(5.0));
  CHECK(lp_norm(x, 1.0) == doctest::Approx(7.0));
  CHECK(lp_norm(x, kInfP) == doctest::Approx(4.0));
  CHECK(lp_pow_sum(x, 2.0) == doctest::Approx(25.0));
  Segment s{{0.0, 0.0}, {3.0, 4.0}, 2.0};
  CHECK(s.length() == doctest::Approx(10.0));
}

TEST_CASE("Gauss-Legendre quadrature") {
  // exact for polynomials up to degree 63
  const double i5 = gl32_integrate([](double t) { return t * t * t * t * t; }, 0.0, 1.0);
  CHECK(i5 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const double isin = gl32_composite([](double t) { return std::sin(t); }, 0.0, M_PI, 4);
  CHECK(isin == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("jets produce true derivatives") {
  // f(t) = exp(1/(1+t^2)) at t = 0.3, finite-difference oracle
  auto f = [](double t) { return std::exp(1.0 / (1.0 + t * t)); };
  const double t0 = 0.3, h = 1e-5;
  Jet4 x = Jet4::variable(t0);
  Jet4 y = ((1.0 + x * x).recip()).exp();
  CHECK(y.deriv(0) == doctest::Approx(f(t0)).epsilon(1e-13));
  const double d1 = (f(t0 + h) - f(t0 - h)) / (2.0 * h);
  CHECK(y.deriv(1) == doctest::Approx(d1).epsilon(1e-8));
  const double d2 = (f(t0 + h) - 2.0 * f(t0) + f(t0 - h)) / (h * h);
  CHECK(y.deriv(2) == doctest::Approx(d2).epsilon(1e-5));
}

TEST_CASE("bump functions") {
  const BumpFn phi = bump_phi();
  CHECK(phi(0.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(phi.deriv(0.0, 1) == doctest::Approx(0.0));
  CHECK(phi(1.0 / 3.0) == 0.0);
  CHECK(phi(0.4) == 0.0);
  // |phi'| < 1 on a scan
  double max_d1 = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -1.0 / 3.0 + (2.0 / 3.0) * i / 1000.0;
    max_d1 = std::max(max_d1, std::fabs(phi.deriv(t, 1)));
  }
  CHECK(max_d1 < 1.0);

  const BumpFn psi = bump_psi();
  CHECK(psi(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(1.0) == 0.0);
  CHECK(psi(2.0) == 0.0);
  CHECK(psi(0.99) == 0.0);
  // derivative matches finite differences
  const double h = 1e-6, t0 = 1.3;
  const double fd = (psi(t0 + h) - psi(t0 - h)) / (2.0 * h);
  CHECK(psi.deriv(t0, 1) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("random streams are deterministic and splittable") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RandomStream c0 = RandomStream(42).child(0);
  RandomStream c0b = RandomStream(42).child(0);
  RandomStream c1 = RandomStream(42).child(1);
  bool differ = false;
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t u = c0.next_u64();
    CHECK(u == c0b.next_u64());
    if (u != c1.next_u64()) differ = true;
  }
  CHECK(differ);
  // uniform lands in [0, 1), sign in {-1, +1}
  RandomStream s(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int sg = s.sign();
    CHECK((sg == 1 || sg == -1));
  }
}

TEST_CASE("basic moments of stream distributions") {
  RandomStream s(11);
  std::vector<double> zs, es;
  for (int i = 0; i < 200000; ++i) {
    zs.push_back(s.normal());
    es.push_back(s.exponential());
  }
  const MeanStderr mz = mean_stderr(zs), me = mean_stderr(es);
  CHECK(std::fabs(mz.mean) < 4.0 * mz.stderr_ + 1e-12);
  CHECK(std::fabs(me.mean - 1.0) < 4.0 * me.stderr_);
}

TEST_CASE("ols recovers exact lines") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(double(i));
    y.push_back(3.0 - 2.0 * i);
  }
  const OlsFit f = ols(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("quantile interpolation") {
  std::vector<double> xs{4.0, 1.0, 3.0, 2.0};
  CHECK(quantile(xs, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(xs, 1.0) == doctest::Approx(4.0));
  CHECK(quantile(xs, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("two-sample chi-square accepts identical laws") {
  RandomStream s(3);
  std::vector<long> c1(20, 0), c2(20, 0);
  for (int i = 0; i < 40000; ++i) {
    c1[std::size_t(s.uniform() * 20.0)]++;
    c2[std::size_t(s.uniform() * 20.0)]++;
  }
  CHECK(chi2_two_sample_pvalue(c1, c2) > 1e-3);
}
