#ifndef HALFLINE_CONNECTIONS_HPP
#define HALFLINE_CONNECTIONS_HPP

#include "halfline/orbit.hpp"
#include "halfline/stepper.hpp"

namespace halfline {

/// Consecutive zeros of the flux with the sign of g in between.
struct ZeroPair {
  double y1 = 0.0, y2 = 0.0;  // y1 < y2
  int sign_between = 0;       // +1 / -1; 0 for a degenerate (tangential) pair
  double gprime_y1 = 0.0, gprime_y2 = 0.0;
  bool degenerate = false;  // double zero at an endpoint (saddle-node)
};

/// All zeros of g in [0, 2*pi), simple and tangential, by bracketing plus
/// bisection (root_tol 1e-12).
struct FluxZero {
  double u = 0.0;
  double gprime = 0.0;
  bool double_zero = false;
};
std::vector<FluxZero> flux_zeros(const FluxModel& f);

/// Consecutive pairs including the gauge wrap-around. A flux with a single
/// tangential zero z yields the homoclinic pair (z - 2*pi, z), flagged
/// degenerate.
std::vector<ZeroPair> find_zero_pairs(const FluxModel& f);

struct ConnectionRates {
  double backward_fit = std::numeric_limits<double>::quiet_NaN();
  double backward_theory = std::numeric_limits<double>::quiet_NaN();
};

/// Entire-solution approximation joining the two states of a ZeroPair,
/// computed from the sub-solution ramp and recentered at the midpoint
/// crossing time t_half.
struct ConnectionRecord {
  ZeroPair pair;
  double c = 0.0;
  Trajectory trajectory;
  double t_half = 0.0;
  ConnectionRates rates;
  bool increasing = false;  // direction in t (g < 0 between: increasing)
  double confinement_lo = 0.0, confinement_hi = 0.0;  // range of u over t > 0
  bool monotone_in_time = false;
  bool ok = false;
  std::string message;
};

struct HetOptions {
  double ramp_n = 100.0;  // ramp offset 1/n from the backward state
  double L = 0.0;         // 0: default truncation
  std::size_t n = 384;
  double dt = 1e-3;
  double target_du0 = 0.0;  // 0: auto
  double t_max = 4000.0;
  double reach_fraction = 1e-3;  // endpoint proximity threshold, fraction of the gap
  // snapshots are dense (snapshot_dt) while the boundary value traverses the
  // interior of the gap and sparse (idle factor) in the slow tails
  double snapshot_dt = 0.1;
  double idle_factor = 20.0;
  double active_band = 0.005;  // fraction of the gap
};

ConnectionRecord compute_heteroclinic(const ZeroPair& pair, const Params& p,
                                      const HetOptions& opt);

/// min over time shifts s of the sup distance on the window
/// [0, x_max] x [t_lo, t_hi] (recentered times), linear interpolation in t.
double translate_distance(const Trajectory& a, double ta_center, const Trajectory& b,
                          double tb_center, double x_max, double t_lo, double t_hi,
                          double* best_shift = nullptr);
double translate_distance(const ConnectionRecord& a, const ConnectionRecord& b, double x_max,
                          double t_lo, double t_hi, double* best_shift = nullptr);

/// Super-solution ladder of the slow-escape lemma: for each k, the first
/// time T_k at which the explicit linear super-solution boundary trace
/// reaches 1/k. Evaluated by direct quadrature of the defining integral (the
/// oracle); both closed-form variants of the erf term are reported and the
/// discrepancy flagged.
struct SupersolRung {
  double k = 0.0;
  double T_k = 0.0;
  double lower_bound = 0.0;  // (1/lambda) log(k-1)
  double closed_form_gamma = 0.0;    // trace at T_k with erf(gamma sqrt(t))
  double closed_form_gamma_sq = 0.0; // trace at T_k with erf(gamma^2 sqrt(t)) as printed
};

struct SupersolLadder {
  double c = 0.0, gprime0 = 0.0, eps = 0.0;
  double lambda = 0.0, gamma = 0.0;
  std::vector<SupersolRung> rungs;
  /// max |oracle - closed form| over the rungs, for each variant
  double mismatch_gamma = 0.0, mismatch_gamma_sq = 0.0;
};

SupersolLadder supersol_ladder(double c, double gprime0, const std::vector<double>& k_list,
                               double eps = 0.0);

/// Boundary trace of the super-solution by quadrature of the defining
/// integral.
double supersol_trace(double t, double c, double lambda, double gamma, double k);
/// The linear super-solution problem (prescribed boundary flux
/// -(gamma/k^2) e^{lambda t}) as a ProblemSpec, for numerical evolution and
/// comparison checks.
ProblemSpec supersol_problem(double c, double lambda, double gamma, double k, FarBC far);

/// Orbit segment on a symmetric time window around phase zero, gauge-lifted
/// so times are centered at 0 (uses u(x, t - T) = u(x, t) + 2 pi).
Trajectory orbit_window(const OrbitRecord& orbit, double half_width, double dt_snap,
                        const OrbitOptions& opt);

/// Closed-form spectrum of the linearization at a constant state:
/// sigma(-A0) = (-inf, -c^2/4] U {g'(0)^2 - g'(0) c}.
struct A0Spectrum {
  double c = 0.0, gprime0 = 0.0;
  double essential_edge = 0.0;  // -c^2/4
  bool has_point = false;
  double point_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double eigenfunction_rate = 0.0;  // lambda_c = sqrt(c^2/4 + sigma_c)
  bool eigenfunction_decaying = false;  // c/2 - g'(0) > 0
};

A0Spectrum a0_spectrum(double c, double gprime0);

struct SnicRow {
  double theta = 0.0;
  double T = 0.0;
  double window_distance = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
};

struct SnicScan {
  std::vector<SnicRow> rows;
  ConnectionRecord homoclinic;  // the theta = 1 limit object
};

/// Period divergence toward theta = 1 and window comparison of the orbit
/// segment against the homoclinic.
SnicScan snic_scan(double c, const Vec& theta_grid, const OrbitOptions& orbit_opt,
                   const HetOptions& het_opt);

}  // namespace halfline

#endif
