#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ll/linemeasure.hpp"
#include "ll/sets.hpp"

using namespace ll;

TEST_CASE("measure_segment exact mode on a ball") {
  const MembershipSet ball = euclidean_ball_set(3, 1.0);
  // diameter segment
  const Segment seg{{-2.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 4.0};
  const LineMeasureResult r = measure_segment(ball, seg);
  CHECK(r.exact);
  CHECK(r.covered_length == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.fraction == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("measure_segment grid mode approaches the exact answer") {
  // same ball without its intersector
  MembershipSet ball = euclidean_ball_set(3, 1.0);
  ball.intersector = nullptr;
  const Segment seg{{-2.0, 0.3, 0.0}, {1.0, 0.0, 0.0}, 4.0};
  RandomStream s(1);
  const LineMeasureResult r = measure_segment(ball, seg, 20000, &s);
  CHECK(!r.exact);
  const double chord = 2.0 * std::sqrt(1.0 - 0.09);
  CHECK(r.covered_length == doctest::Approx(chord).epsilon(0.01));
}

TEST_CASE("measure_line windows find off-center chords") {
  MembershipSet ball = euclidean_ball_set(2, 1.0);
  const Line l{{5.0, 0.5}, {1.0, 0.0}};
  // exact path
  const LineMeasureResult ex = measure_line(ball, l);
  CHECK(ex.covered_length == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-12));
  // grid path: window centered at the closest approach must still see it
  ball.intersector = nullptr;
  RandomStream s(2);
  const LineMeasureResult gr = measure_line(ball, l, 20000, &s);
  CHECK(gr.covered_length == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(0.03));
}

TEST_CASE("zero direction yields zero measure") {
  const MembershipSet ball = euclidean_ball_set(2, 1.0);
  MembershipSet no_exact = ball;
  no_exact.intersector = nullptr;
  const LineMeasureResult r = measure_line(no_exact, Line{{0.0, 0.0}, {0.0, 0.0}});
  CHECK(r.covered_length == 0.0);
}

TEST_CASE("sup_line_search finds the diameter of a ball") {
  const MembershipSet ball = euclidean_ball_set(4, 3.0);
  RandomStream s(7);
  const SupLineResult res = sup_line_search(ball, s);
  CHECK(res.length == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("sup_line_search on a thin euclidean shell beats a generic chord") {
  // widest chord of {0.9 <= |x| <= 1.0} is the near-tangent one:
  // 2 sqrt(1 - 0.81) ~ 0.8718
  const MembershipSet shell = euclidean_shell(3, 0.9, 1.0);
  RandomStream s(8);
  const SupLineResult res = sup_line_search(shell, s);
  const double best = 2.0 * std::sqrt(1.0 - 0.81);
  CHECK(res.length > 0.8 * best);
  CHECK(res.length <= best + 1e-9);
}

TEST_CASE("sup_line_search respects seed segments") {
  const MembershipSet ball = euclidean_ball_set(5, 2.0);
  SupLineParams params;
  params.pair_proposals = 0;
  params.dir_proposals = 0;
  params.hill_rounds = 0;
  Vec o(5, 0.0), d(5, 0.0);
  o[0] = -2.0;
  d[0] = 4.0;
  params.seeds = {Segment{o, d, 1.0}};
  RandomStream s(9);
  const SupLineResult res = sup_line_search(ball, s, params);
  CHECK(res.length == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("search is replayable") {
  const MembershipSet shell = euclidean_shell(3, 0.8, 1.0);
  RandomStream a(11), b(11);
  const SupLineResult ra = sup_line_search(shell, a);
  const SupLineResult rb = sup_line_search(shell, b);
  CHECK(ra.length == rb.length);
}
