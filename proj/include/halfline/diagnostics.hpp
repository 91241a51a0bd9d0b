#ifndef HALFLINE_DIAGNOSTICS_HPP
#define HALFLINE_DIAGNOSTICS_HPP

#include "halfline/stepper.hpp"

namespace halfline {

/// Pointwise ordering check between two runs on the same grid with
/// snapshots at matching times (comparison principle instance).
struct ComparisonReport {
  bool ordered = true;
  double worst_gap = 0.0;            // max over data of (lower - upper)
  double first_violation_time = -1;  // -1 when ordered
  std::size_t compared_snapshots = 0;
};

ComparisonReport check_comparison(const Trajectory& lower, const Trajectory& upper,
                                  double mesh_tol);

/// Sign-change count of a sampled profile. A run of |v| < tol without a sign
/// change flags a suspected multiple zero (simple = false); v identically
/// below tolerance is degenerate and carries no count.
struct ZeroCount {
  double t = 0.0;
  long count = 0;
  bool simple = true;
  bool degenerate = false;
};

ZeroCount zero_count(const Field& v, double tol = 0.0);
ZeroCount zero_count_values(const Vec& v, double tol, double t = 0.0);

/// Zero counts of the difference a - b at matching snapshot times.
std::vector<ZeroCount> zero_history(const Trajectory& a, const Trajectory& b, double tol = 0.0);

/// min over stored snapshots (t > 0) of min_x du/dx (spatial monotonicity).
double min_spatial_slope(const Trajectory& traj);

}  // namespace halfline

#endif
