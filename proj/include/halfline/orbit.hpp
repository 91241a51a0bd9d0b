#ifndef HALFLINE_ORBIT_HPP
#define HALFLINE_ORBIT_HPP

#include <complex>

#include "halfline/floquet.hpp"
#include "halfline/stepper.hpp"

namespace halfline {

/// A relative time-periodic solution, u(., t + T) = u(., t) - 2*pi, with the
/// phase fixed by u(0, 0) = y_phase.
struct OrbitRecord {
  double c = 0.0;
  FluxModel flux = FluxModel::cosine(0.0);
  double T = 0.0;
  double omega = 0.0;   // 2 pi / T
  double strain = 0.0;  // omega / c for c > 0
  Field profile0;
  double y_phase = 0.0;
  double k_far = 1.0;  // Neumann far-field strain used by the truncated run
  std::vector<std::complex<double>> floquet;
  double residual = std::numeric_limits<double>::quiet_NaN();

  // sampled monotonicity/gradient diagnostics along one period
  double min_slope = 0.0, max_slope = 0.0;  // range of du/dx
  double max_dtu0 = 0.0;                    // max of du(0)/dt (negative on orbits)

  int newton_iterations = 0;
  bool ok = false;
  std::string message;

  Params params() const { return Params(c, flux); }
};

struct OrbitOptions {
  double y_phase = 0.0;
  double dt = 2e-3;          // detection step (adaptive cap when target_du0 > 0)
  double dt_refine = 2e-3;   // step for residual / Newton / Floquet integrations
  double target_du0 = 0.0;   // >0: adapt dt to this boundary motion per step
  double t_end = 0.0;        // 0: derived from the period bounds
  double settle_rel_tol = 1e-6;
  int min_periods = 3;
  int max_periods = 256;
  double newton_tol = 1e-10;
  int newton_maxit = 14;
  double gmres_tol = 1e-5;
  int gmres_maxit = 90;
  int floquet_m = 3;
  bool compute_floquet = true;
  // grid construction (continue_branch / scans); L = 0 picks the default
  // truncation for the given c
  double L = 0.0;
  std::size_t n = 512;
  bool clustered = false;
  double cluster_alpha = 2.5;
};

/// Long-time integration until the boundary trace drops by whole gauge
/// periods; T from successive crossings of y_phase (mod 2 pi). Fails with
/// "no periodic orbit" when no gauge drop happens within the horizon.
OrbitRecord find_orbit_attract(const Params& p, const Field& u0, const OrbitOptions& opt);

/// Newton-Krylov refinement of the return map F(u0, T) = u(., T) - u0 + 2 pi
/// with phase condition u(0,0) = y_phase; residual to opt.newton_tol.
OrbitRecord refine_orbit_newton(const OrbitRecord& seed, const OrbitOptions& opt);

/// Leading Floquet multipliers of the refined orbit (monodromy of the
/// linearized period map); also returns the weighted leading eigenvector and
/// its angle to -d/dt u~(., 0).
FloquetResult orbit_floquet(const OrbitRecord& orbit, int m, const OrbitOptions& opt);

struct BranchPoint {
  double theta = 0.0;
  OrbitRecord orbit;
  double continuation_step = 0.0;
};

/// Secant-predictor / Newton-corrector continuation in theta of the cosine
/// family, starting from the exact orbit at theta = 0.
std::vector<BranchPoint> continue_branch(double c, const Vec& theta_grid,
                                         const OrbitOptions& opt);

struct ScanRow {
  double c = 0.0, T = 0.0, omega = 0.0, k = 0.0;
  double k_fit = 0.0, k_fit_err = 0.0;
  bool ok = false;
  std::string message;
};

/// Orbit computation per advection speed: period, frequency, selected strain
/// k = omega / c, and a far-field strain fit from the profile.
std::vector<ScanRow> strain_frequency_scan(double theta, const Vec& c_grid,
                                           const OrbitOptions& opt);

struct ModeDecayFit {
  int k = 0;
  double fitted_rate = 0.0;
  double predicted_rate = 0.0;  // Re nu_k^-
};

/// Spatial decay of the weighted temporal Fourier modes along the orbit,
/// fitted log-slope against Re nu_k^-.
std::vector<ModeDecayFit> orbit_tail_mode_fit(const OrbitRecord& orbit,
                                              const std::vector<int>& ks,
                                              const OrbitOptions& opt);

/// Integrate the orbit over exactly one period with n_slices stored states
/// (used by window comparisons and the mode fit).
std::vector<Snapshot> orbit_time_slices(const OrbitRecord& orbit, int n_slices,
                                        const OrbitOptions& opt);

namespace detail {
/// GMRES without restarts (modified Gram-Schmidt, Givens); returns the
/// achieved relative residual.
double gmres_solve(const std::function<Vec(const Vec&)>& matvec, const Vec& b, Vec& x,
                   int maxit, double rel_tol);
}  // namespace detail

}  // namespace halfline

#endif
