#ifndef HALFLINE_STEPPER_HPP
#define HALFLINE_STEPPER_HPP

#include <functional>
#include <memory>
#include <optional>

#include "halfline/banded.hpp"
#include "halfline/grid.hpp"

namespace halfline {

/// Far boundary condition at the truncation x = L.
struct FarBC {
  enum class Kind { dirichlet_zero, neumann_strain, robin_decay };
  Kind kind = Kind::dirichlet_zero;
  double strain = 0.0;       // neumann_strain: u'(L) = strain
  double robin_coeff = 0.0;  // robin_decay:   u'(L) = robin_coeff * u(L)

  /// u~ = 0 at x = L in weighted variables (equivalently u(L) = 0).
  static FarBC dirichlet_zero() { return {}; }
  static FarBC neumann(double k) { return {Kind::neumann_strain, k, 0.0}; }
  static FarBC robin(double coeff) { return {Kind::robin_decay, 0.0, coeff}; }
};

/// Linear parabolic interior with a nonlinear flux condition at x = 0:
///   du/dt = u_xx - a(x) u_x - r(x) u,   x in (0, L)
///   u_x(0, t) = B(u(0, t), t)
/// plus a far condition at x = L.
struct ProblemSpec {
  std::function<double(double)> advection;           // a(x)
  std::function<double(double)> reaction;            // r(x)
  std::function<double(double, double)> flux;        // B(u, t)
  std::function<double(double, double)> flux_du;     // dB/du
  FarBC far;
};

/// The advection-diffusion problem with boundary flux g.
ProblemSpec advection_diffusion_problem(const Params& p, FarBC far);

struct EvolveConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  enum class Scheme { imex_trapezoid, implicit_newton };
  Scheme scheme = Scheme::imex_trapezoid;
  FarBC far = FarBC::dirichlet_zero();
  std::size_t snapshot_every = 0;  // 0: keep first and last snapshot only

  // step-size control; stability is monitored, not assumed
  double dt_growth = 1.0;  // geometric ramp (graded start for sqrt(t) data)
  double dt_max = 0.0;     // 0: equal to dt
  double target_du0 = 0.0; // >0: adapt dt to move u(0) by about this per step
  double newton_tol = 1e-10;
  int newton_maxit = 12;
  int max_rejections = 20;
};

struct TracePoint {
  double t, u0, ux0;
};

struct Snapshot {
  double t;
  Vec values;
};

/// Time-stamped solution records plus the boundary-trace time series.
struct Trajectory {
  std::shared_ptr<const Grid1D> grid;
  std::vector<Snapshot> snapshots;
  std::vector<TracePoint> trace;
  double bc_residual_max = 0.0;
  bool ok = true;
  std::string message;

  Field field_at(std::size_t snapshot_index) const;
  /// Boundary value u(0, t) linearly interpolated from the trace.
  double trace_value(double t) const;
};

/// Evolve the Cauchy problem; the boundary condition is satisfied at each
/// accepted step to Newton tolerance (implicit_newton) or to local O(dt^2)
/// (imex_trapezoid). Rejected steps halve dt; more than
/// cfg.max_rejections rejections aborts with ok = false.
Trajectory evolve(const Params& p, const Field& u0, const EvolveConfig& cfg);

/// Same driver for a caller-assembled problem (weighted equation,
/// similarity variables, ...).
Trajectory evolve_general(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec,
                          const Vec& u0, const EvolveConfig& cfg);

/// Single-step engine underlying evolve(); exposed for the orbit and
/// connection solvers which need step-level control.
class FluxStepper {
 public:
  FluxStepper(std::shared_ptr<const Grid1D> grid, ProblemSpec spec, EvolveConfig cfg);

  void set_state(double t, const Vec& u);
  const Vec& state() const { return u_; }
  double time() const { return t_; }
  double boundary_value() const { return u_[0]; }
  double boundary_slope() const;
  double bc_residual() const;

  /// One step of size dt; returns false when the boundary Newton fails
  /// (state unchanged in that case).
  bool try_step(double dt);

  const Grid1D& grid() const { return *grid_; }
  std::shared_ptr<const Grid1D> grid_ptr() const { return grid_; }

 private:
  void build_operator();
  void prepare(double dt);

  std::shared_ptr<const Grid1D> grid_;
  ProblemSpec spec_;
  EvolveConfig cfg_;
  double t_ = 0.0;
  Vec u_;
  // frozen interior operator A (rows 1..n-2) and boundary derivative rows
  Vec a_sub_, a_dia_, a_sup_;
  double d0_[3] = {0, 0, 0};  // one-sided derivative at x = 0
  double dl_[3] = {0, 0, 0};  // one-sided derivative at x = L
  // Crank-Nicolson base matrix for the current dt (flux linearization enters
  // through a rank-one correction at (0,0))
  double dt_cached_ = -1.0;
  std::unique_ptr<BandedMatrix> base_;
  Vec sm_col_;  // base^{-1} e_0 for the Sherman-Morrison update
  Vec rhs_, work_;
};

/// Propagator of the linearized equation around a stored solution:
///   dw/dt = w_xx - a(x) w_x - r(x) w,  w_x(0) = gp(t) w(0),
/// homogeneous far condition of the same kind as the base run. Used for
/// monodromy action and Newton-Krylov directional derivatives.
class LinearizedStepper {
 public:
  LinearizedStepper(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec, double dt,
                    std::function<double(double)> gp);

  /// Integrate w over [t0, t0 + nsteps * dt] in place.
  void propagate(Vec& w, double t0, int nsteps) const;
  void propagate_block(std::vector<Vec>& ws, double t0, int nsteps) const;

 private:
  void step_block(std::vector<Vec*>& ws, double t) const;

  std::shared_ptr<const Grid1D> grid_;
  double dt_;
  std::function<double(double)> gp_;
  Vec a_sub_, a_dia_, a_sup_;  // interior operator rows
  double d0_[3] = {0, 0, 0};
  double dl_[3] = {0, 0, 0};
  FarBC::Kind far_kind_;
  double far_coeff_ = 0.0;
  std::unique_ptr<BandedMatrix> base_;
  Vec sm_col_;
};

/// Cubic (Catmull-Rom) interpolation over uniform samples on [t0, t0+n*dt],
/// with either clamped or periodic end handling.
class UniformCubicInterp {
 public:
  UniformCubicInterp() = default;
  UniformCubicInterp(double t0, double dt, Vec samples, bool periodic);
  double operator()(double t) const;

 private:
  double t0_ = 0.0, dt_ = 1.0;
  Vec y_;
  bool periodic_ = false;
};

}  // namespace halfline

#endif
