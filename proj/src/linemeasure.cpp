#include "ll/linemeasure.hpp"

#include <algorithm>
#include <cmath>

namespace ll {

namespace {

LineMeasureResult grid_measure(const MembershipSet& set, const Line& l, double t_lo,
                               double t_hi, long grid, RandomStream* stream) {
  LineMeasureResult r;
  r.grid_points = grid;
  if (t_hi <= t_lo || grid <= 0) return r;
  long hits = 0;
  const double dt = (t_hi - t_lo) / double(grid);
  for (long j = 0; j < grid; ++j) {
    const double u = stream ? stream->uniform() : 0.5;
    const double t = t_lo + (double(j) + u) * dt;
    if (set.contains(axpy(l.origin, t, l.dir))) ++hits;
  }
  r.fraction = double(hits) / double(grid);
  r.covered_length = r.fraction * (t_hi - t_lo) * norm2(l.dir);
  return r;
}

}  // namespace

LineMeasureResult measure_segment(const MembershipSet& set, const Segment& seg, long grid,
                                  RandomStream* stream) {
  const Line l{seg.origin, seg.dir};
  if (set.has_intersector()) {
    LineMeasureResult r;
    r.exact = true;
    r.intervals = clip_intervals(set.intersector(l), 0.0, seg.t_max);
    const double t_cov = total_length(r.intervals);
    r.covered_length = t_cov * norm2(seg.dir);
    r.fraction = seg.t_max > 0.0 ? t_cov / seg.t_max : 0.0;
    return r;
  }
  return grid_measure(set, l, 0.0, seg.t_max, grid, stream);
}

LineMeasureResult measure_line(const MembershipSet& set, const Line& l, long grid,
                               RandomStream* stream, double window_scales) {
  if (set.has_intersector()) {
    LineMeasureResult r;
    r.exact = true;
    r.intervals = set.intersector(l);
    const double t_cov = total_length(r.intervals);
    r.covered_length = t_cov * norm2(l.dir);
    const double span = r.intervals.empty()
                            ? 0.0
                            : r.intervals.back().hi - r.intervals.front().lo;
    r.fraction = span > 0.0 ? t_cov / span : 0.0;
    return r;
  }
  const double nd = norm2(l.dir);
  if (nd <= 0.0) return {};
  const double tc = -dot(l.origin, l.dir) / (nd * nd);
  const double half = window_scales * set.scale / nd;
  return grid_measure(set, l, tc - half, tc + half, grid, stream);
}

SupLineResult sup_line_search(const MembershipSet& set, RandomStream& stream,
                              const SupLineParams& params) {
  SupLineResult best;
  auto eval = [&](const Line& l) {
    ++best.evaluations;
    return measure_line(set, l, params.grid, &stream);
  };
  auto consider = [&](const Line& l) {
    if (norm2(l.dir) <= 0.0) return;
    LineMeasureResult m = eval(l);
    if (m.covered_length > best.length) {
      best.length = m.covered_length;
      best.line = l;
      best.measure = std::move(m);
    }
  };
  auto draw_in_set = [&](int tries) -> std::optional<Vec> {
    for (int i = 0; i < tries; ++i) {
      Vec x = set.ambient(stream);
      if (set.contains(x)) return x;
    }
    return std::nullopt;
  };

  for (const Segment& s : params.seeds) consider({s.origin, s.dir});

  for (int i = 0; i < params.pair_proposals; ++i) {
    auto a = draw_in_set(64), b = draw_in_set(64);
    if (!a || !b) continue;
    Vec d(a->size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = (*b)[j] - (*a)[j];
    const double nd = norm2(d);
    if (nd <= 0.0) continue;
    for (double& v : d) v /= nd;
    consider({*a, d});
  }

  for (int i = 0; i < params.dir_proposals; ++i) {
    auto a = draw_in_set(64);
    if (!a) continue;
    Vec d(a->size());
    for (double& v : d) v = stream.normal();
    const double nd = norm2(d);
    if (nd <= 0.0) continue;
    for (double& v : d) v /= nd;
    consider({*a, d});
  }

  if (best.length <= 0.0 && norm2(best.line.dir) <= 0.0) {
    // nothing found: fall back to a line through an ambient draw
    Vec a = set.ambient(stream);
    Vec d(a.size(), 0.0);
    d[0] = 1.0;
    best.line = {a, d};
    best.measure = eval(best.line);
    best.length = best.measure.covered_length;
  }

  double step = params.init_step * set.scale;
  for (int round = 0; round < params.hill_rounds; ++round) {
    bool improved = false;
    for (int t = 0; t < params.hill_tries; ++t) {
      Line cand = best.line;
      for (double& v : cand.origin) v += step * stream.normal();
      const double dstep = step / std::max(set.scale, 1e-300);
      for (double& v : cand.dir) v += dstep * stream.normal();
      const double nd = norm2(cand.dir);
      if (nd <= 0.0) continue;
      for (double& v : cand.dir) v /= nd;
      LineMeasureResult m = eval(cand);
      if (m.covered_length > best.length) {
        best.length = m.covered_length;
        best.line = cand;
        best.measure = std::move(m);
        improved = true;
      }
    }
    if (!improved) step *= params.decay;
  }
  return best;
}

}  // namespace ll
