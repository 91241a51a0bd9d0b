#include "halfline/diagnostics.hpp"

#include <cmath>

namespace halfline {

ComparisonReport check_comparison(const Trajectory& lower, const Trajectory& upper,
                                  double mesh_tol) {
  if (lower.grid->n() != upper.grid->n())
    throw std::invalid_argument("check_comparison: grids differ");
  ComparisonReport rep;
  std::size_t j = 0;
  for (const Snapshot& sl : lower.snapshots) {
    while (j < upper.snapshots.size() && upper.snapshots[j].t < sl.t - 1e-12) ++j;
    if (j >= upper.snapshots.size()) break;
    const Snapshot& su = upper.snapshots[j];
    if (std::abs(su.t - sl.t) > 1e-9 * std::max(1.0, sl.t)) continue;
    ++rep.compared_snapshots;
    for (std::size_t i = 0; i < sl.values.size(); ++i) {
      const double gap = sl.values[i] - su.values[i];
      if (gap > rep.worst_gap) rep.worst_gap = gap;
      if (gap > mesh_tol && rep.ordered) {
        rep.ordered = false;
        rep.first_violation_time = sl.t;
      }
    }
  }
  return rep;
}

ZeroCount zero_count_values(const Vec& v, double tol, double t) {
  ZeroCount zc;
  zc.t = t;
  if (tol <= 0.0) tol = 1e-9 * sup_norm(v);
  if (tol == 0.0) {
    zc.degenerate = true;
    zc.simple = false;
    return zc;
  }
  int prev_sign = 0;
  bool in_plateau = false;
  bool all_small = true;
  for (double x : v) {
    int s = 0;
    if (x > tol) s = 1;
    else if (x < -tol) s = -1;
    if (s == 0) {
      in_plateau = true;
      continue;
    }
    all_small = false;
    if (prev_sign != 0 && s != prev_sign) {
      ++zc.count;
    } else if (prev_sign != 0 && s == prev_sign && in_plateau) {
      // dipped below tolerance and came back with the same sign
      zc.simple = false;
    }
    prev_sign = s;
    in_plateau = false;
  }
  if (all_small) {
    zc.degenerate = true;
    zc.simple = false;
  }
  return zc;
}

ZeroCount zero_count(const Field& v, double tol) { return zero_count_values(v.values, tol); }

std::vector<ZeroCount> zero_history(const Trajectory& a, const Trajectory& b, double tol) {
  if (a.grid->n() != b.grid->n()) throw std::invalid_argument("zero_history: grids differ");
  std::vector<ZeroCount> out;
  std::size_t j = 0;
  for (const Snapshot& sa : a.snapshots) {
    while (j < b.snapshots.size() && b.snapshots[j].t < sa.t - 1e-12) ++j;
    if (j >= b.snapshots.size()) break;
    const Snapshot& sb = b.snapshots[j];
    if (std::abs(sb.t - sa.t) > 1e-9 * std::max(1.0, sa.t)) continue;
    Vec diff(sa.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = sa.values[i] - sb.values[i];
    ZeroCount zc = zero_count_values(diff, tol, sa.t);
    out.push_back(zc);
  }
  return out;
}

double min_spatial_slope(const Trajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (const Snapshot& s : traj.snapshots) {
    if (s.t <= 0.0) continue;
    const Vec d = derivative_samples(*traj.grid, s.values);
    for (double x : d) m = std::min(m, x);
  }
  return m;
}

}  // namespace halfline
