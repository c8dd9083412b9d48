#pragma once

#include "ll/rng.hpp"
#include "ll/sets.hpp"
#include "ll/vec.hpp"

namespace ll {

struct LineMeasureResult {
  double covered_length = 0.0;  // length of the probe inside the set
  double fraction = 0.0;        // covered / probed length
  bool exact = false;           // true when an exact intersector was used
  long grid_points = 0;
  IntervalList intervals;       // in t-units (exact mode only)
};

/// Length of segment-cap-set. Uses the set's exact intersector when present,
/// else a stratified membership grid (grid cells, one random offset each;
/// pass a stream for the random offsets, or nullptr for midpoints).
LineMeasureResult measure_segment(const MembershipSet& set, const Segment& seg,
                                  long grid = 256, RandomStream* stream = nullptr);

/// Length of the full line inside the set. Grid fallback probes a window of
/// half-width window_scales * set.scale around the closest approach to 0.
LineMeasureResult measure_line(const MembershipSet& set, const Line& l, long grid = 1024,
                               RandomStream* stream = nullptr, double window_scales = 3.0);

struct SupLineParams {
  int pair_proposals = 64;   // lines through two in-set ambient draws
  int dir_proposals = 64;    // random direction through one in-set point
  int hill_rounds = 20;
  int hill_tries = 8;        // perturbations per round
  long grid = 1024;
  double init_step = 0.1;    // initial perturbation, in units of set.scale
  double decay = 0.5;
  std::vector<Segment> seeds;
};

struct SupLineResult {
  Line line;
  double length = 0.0;       // covered length of the best line found
  LineMeasureResult measure;
  long evaluations = 0;
};

/// Randomized search for a line with a long intersection with the set:
/// pair/direction proposals plus seeds, refined by a decaying random
/// hill-climb on origin and direction.
SupLineResult sup_line_search(const MembershipSet& set, RandomStream& stream,
                              const SupLineParams& params = {});

}  // namespace ll
