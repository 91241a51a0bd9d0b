#include "halfline/stepper.hpp"

#include <cmath>
#include <stdexcept>

namespace halfline {

namespace {

struct DerivRows {
  // second-order one-sided first-derivative stencils at both ends
  double d0[3], dl[3];
};

DerivRows one_sided_rows(const Grid1D& g) {
  DerivRows r{};
  const std::size_t n = g.n();
  {
    const double h1 = g.nodes[1] - g.nodes[0], h2 = g.nodes[2] - g.nodes[1];
    r.d0[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    r.d0[1] = (h1 + h2) / (h1 * h2);
    r.d0[2] = -h1 / (h2 * (h1 + h2));
  }
  {
    const double h1 = g.nodes[n - 1] - g.nodes[n - 2], h2 = g.nodes[n - 2] - g.nodes[n - 3];
    r.dl[0] = (2.0 * h1 + h2) / (h1 * (h1 + h2));
    r.dl[1] = -(h1 + h2) / (h1 * h2);
    r.dl[2] = h1 / (h2 * (h1 + h2));
  }
  return r;
}

void interior_rows(const Grid1D& g, const ProblemSpec& spec, Vec& sub, Vec& dia, Vec& sup) {
  const std::size_t n = g.n();
  sub.assign(n, 0.0);
  dia.assign(n, 0.0);
  sup.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.nodes[i] - g.nodes[i - 1];
    const double hp = g.nodes[i + 1] - g.nodes[i];
    const double a = spec.advection ? spec.advection(g.nodes[i]) : 0.0;
    const double rr = spec.reaction ? spec.reaction(g.nodes[i]) : 0.0;
    sub[i] = 2.0 / (hm * (hm + hp)) - a * (-hp / (hm * (hm + hp)));
    dia[i] = -2.0 / (hm * hp) - a * ((hp - hm) / (hm * hp)) - rr;
    sup[i] = 2.0 / (hp * (hm + hp)) - a * (hm / (hp * (hm + hp)));
  }
}

// Crank-Nicolson base matrix (flux linearization handled as a rank-one
// update at (0,0)).
std::unique_ptr<BandedMatrix> assemble_base(const Grid1D& g, double dt, const Vec& sub,
                                            const Vec& dia, const Vec& sup, const double d0[3],
                                            const double dl[3], FarBC::Kind far_kind,
                                            double robin_coeff, Vec& sm_col) {
  const int n = static_cast<int>(g.n());
  auto m = std::make_unique<BandedMatrix>(n, 2, 2);
  m->set(0, 0, d0[0]);
  m->set(0, 1, d0[1]);
  m->set(0, 2, d0[2]);
  for (int i = 1; i + 1 < n; ++i) {
    m->set(i, i - 1, -0.5 * dt * sub[i]);
    m->set(i, i, 1.0 - 0.5 * dt * dia[i]);
    m->set(i, i + 1, -0.5 * dt * sup[i]);
  }
  switch (far_kind) {
    case FarBC::Kind::dirichlet_zero:
      m->set(n - 1, n - 1, 1.0);
      break;
    case FarBC::Kind::neumann_strain:
      m->set(n - 1, n - 1, dl[0]);
      m->set(n - 1, n - 2, dl[1]);
      m->set(n - 1, n - 3, dl[2]);
      break;
    case FarBC::Kind::robin_decay:
      m->set(n - 1, n - 1, dl[0] - robin_coeff);
      m->set(n - 1, n - 2, dl[1]);
      m->set(n - 1, n - 3, dl[2]);
      break;
  }
  m->factorize();
  sm_col.assign(n, 0.0);
  sm_col[0] = 1.0;
  m->solve(sm_col);
  return m;
}

// solve (Base + rho e0 e0^T) x = rhs given Base^{-1} (in m) and Base^{-1} e0
void sherman_morrison_solve(const BandedMatrix& m, const Vec& sm_col, double rho, Vec& rhs) {
  m.solve(rhs);
  const double denom = 1.0 + rho * sm_col[0];
  if (std::abs(denom) < 1e-14) throw std::runtime_error("stepper: singular boundary update");
  const double scale = rho * rhs[0] / denom;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= scale * sm_col[i];
}

}  // namespace

ProblemSpec advection_diffusion_problem(const Params& p, FarBC far) {
  ProblemSpec spec;
  const double c = p.c;
  spec.advection = [c](double) { return c; };
  spec.reaction = [](double) { return 0.0; };
  const FluxModel flux = p.flux;
  spec.flux = [flux](double u, double) { return flux.eval(u); };
  spec.flux_du = [flux](double u, double) { return flux.deriv(u); };
  spec.far = far;
  return spec;
}

FluxStepper::FluxStepper(std::shared_ptr<const Grid1D> grid, ProblemSpec spec, EvolveConfig cfg)
    : grid_(std::move(grid)), spec_(std::move(spec)), cfg_(cfg) {
  build_operator();
  u_.assign(grid_->n(), 0.0);
  rhs_.assign(grid_->n(), 0.0);
  work_.assign(grid_->n(), 0.0);
}

void FluxStepper::build_operator() {
  interior_rows(*grid_, spec_, a_sub_, a_dia_, a_sup_);
  const DerivRows r = one_sided_rows(*grid_);
  for (int k = 0; k < 3; ++k) {
    d0_[k] = r.d0[k];
    dl_[k] = r.dl[k];
  }
}

void FluxStepper::set_state(double t, const Vec& u) {
  if (u.size() != grid_->n()) throw std::invalid_argument("FluxStepper: state size mismatch");
  t_ = t;
  u_ = u;
}

double FluxStepper::boundary_slope() const {
  return d0_[0] * u_[0] + d0_[1] * u_[1] + d0_[2] * u_[2];
}

double FluxStepper::bc_residual() const {
  return std::abs(boundary_slope() - spec_.flux(u_[0], t_));
}

void FluxStepper::prepare(double dt) {
  if (dt == dt_cached_ && base_) return;
  base_ = assemble_base(*grid_, dt, a_sub_, a_dia_, a_sup_, d0_, dl_, spec_.far.kind,
                        spec_.far.robin_coeff, sm_col_);
  dt_cached_ = dt;
}

bool FluxStepper::try_step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("FluxStepper: dt must be positive");
  prepare(dt);
  const std::size_t n = grid_->n();
  const double t1 = t_ + dt;

  Vec rhs_interior(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double au = a_sub_[i] * u_[i - 1] + a_dia_[i] * u_[i] + a_sup_[i] * u_[i + 1];
    rhs_interior[i] = u_[i] + 0.5 * dt * au;
  }
  double far_rhs = 0.0;
  if (spec_.far.kind == FarBC::Kind::neumann_strain) far_rhs = spec_.far.strain;

  double u_lin = u_[0];
  const int maxit = (cfg_.scheme == EvolveConfig::Scheme::imex_trapezoid) ? 1 : cfg_.newton_maxit;
  for (int it = 0; it < maxit; ++it) {
    const double bu = spec_.flux_du(u_lin, t1);
    const double rho = -bu;
    rhs_ = rhs_interior;
    rhs_[0] = spec_.flux(u_lin, t1) - bu * u_lin;
    rhs_[n - 1] = far_rhs;
    sherman_morrison_solve(*base_, sm_col_, rho, rhs_);
    if (!all_finite(rhs_)) return false;
    const double slope = d0_[0] * rhs_[0] + d0_[1] * rhs_[1] + d0_[2] * rhs_[2];
    const double res = std::abs(slope - spec_.flux(rhs_[0], t1));
    if (cfg_.scheme == EvolveConfig::Scheme::imex_trapezoid || res <= cfg_.newton_tol) {
      u_.swap(rhs_);
      t_ = t1;
      return true;
    }
    if (res > 1e8) return false;  // diverging Newton
    u_lin = rhs_[0];
  }
  return false;
}

Field Trajectory::field_at(std::size_t snapshot_index) const {
  const Snapshot& s = snapshots.at(snapshot_index);
  const double L = grid->length();
  auto [b, k] = fit_affine_window(*grid, s.values, 0.55 * L, 0.85 * L);
  return Field(grid, s.values, FarField{k, b});
}

double Trajectory::trace_value(double t) const {
  if (trace.empty()) throw std::logic_error("Trajectory: empty trace");
  if (t <= trace.front().t) return trace.front().u0;
  if (t >= trace.back().t) return trace.back().u0;
  std::size_t lo = 0, hi = trace.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (trace[mid].t <= t ? lo : hi) = mid;
  }
  const double w = (t - trace[lo].t) / (trace[hi].t - trace[lo].t);
  return (1.0 - w) * trace[lo].u0 + w * trace[hi].u0;
}

Trajectory evolve_general(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec,
                          const Vec& u0, const EvolveConfig& cfg) {
  FluxStepper stepper(grid, spec, cfg);
  stepper.set_state(0.0, u0);

  Trajectory traj;
  traj.grid = grid;
  traj.snapshots.push_back({0.0, u0});
  traj.trace.push_back({0.0, u0[0], boundary_derivative(*grid, u0)});

  const double dt_max = cfg.dt_max > 0.0 ? cfg.dt_max : cfg.dt;
  double dt_cur = std::min(cfg.dt, dt_max);
  int rejections = 0;
  std::size_t accepted = 0;
  double last_u0 = u0[0];

  while (stepper.time() < cfg.t_end * (1.0 - 1e-14) ) {
    const double dt_try = std::min(dt_cur, cfg.t_end - stepper.time());
    if (dt_try < 1e-15 * std::max(1.0, cfg.t_end)) break;
    if (!stepper.try_step(dt_try)) {
      ++rejections;
      dt_cur *= 0.5;
      if (rejections > cfg.max_rejections || dt_cur < 1e-15) {
        traj.ok = false;
        traj.message = "boundary Newton failed after " + std::to_string(rejections) +
                       " rejections (t = " + std::to_string(stepper.time()) + ")";
        break;
      }
      continue;
    }
    ++accepted;
    traj.trace.push_back({stepper.time(), stepper.boundary_value(), stepper.boundary_slope()});
    traj.bc_residual_max = std::max(traj.bc_residual_max, stepper.bc_residual());
    if (cfg.snapshot_every > 0 && accepted % cfg.snapshot_every == 0)
      traj.snapshots.push_back({stepper.time(), stepper.state()});

    if (cfg.target_du0 > 0.0) {
      const double moved = std::abs(stepper.boundary_value() - last_u0);
      const double ratio = moved > 0.0 ? cfg.target_du0 / moved : 2.0;
      dt_cur *= std::clamp(ratio, 0.5, 2.0);
    } else if (cfg.dt_growth > 1.0) {
      dt_cur *= cfg.dt_growth;
    }
    dt_cur = std::min(dt_cur, dt_max);
    last_u0 = stepper.boundary_value();
  }
  if (traj.snapshots.back().t != stepper.time())
    traj.snapshots.push_back({stepper.time(), stepper.state()});
  return traj;
}

Trajectory evolve(const Params& p, const Field& u0, const EvolveConfig& cfg) {
  return evolve_general(u0.grid, advection_diffusion_problem(p, cfg.far), u0.values, cfg);
}

LinearizedStepper::LinearizedStepper(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec,
                                     double dt, std::function<double(double)> gp)
    : grid_(std::move(grid)), dt_(dt), gp_(std::move(gp)) {
  interior_rows(*grid_, spec, a_sub_, a_dia_, a_sup_);
  const DerivRows r = one_sided_rows(*grid_);
  for (int k = 0; k < 3; ++k) {
    d0_[k] = r.d0[k];
    dl_[k] = r.dl[k];
  }
  far_kind_ = spec.far.kind;
  far_coeff_ = spec.far.robin_coeff;
  base_ = assemble_base(*grid_, dt_, a_sub_, a_dia_, a_sup_, d0_, dl_, far_kind_, far_coeff_,
                        sm_col_);
}

void LinearizedStepper::step_block(std::vector<Vec*>& ws, double t) const {
  const std::size_t n = grid_->n();
  const double t1 = t + dt_;
  const double rho = -gp_(t1);
  Vec rhs(n);
  for (Vec* wp : ws) {
    Vec& w = *wp;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double aw = a_sub_[i] * w[i - 1] + a_dia_[i] * w[i] + a_sup_[i] * w[i + 1];
      rhs[i] = w[i] + 0.5 * dt_ * aw;
    }
    rhs[0] = 0.0;
    rhs[n - 1] = 0.0;
    sherman_morrison_solve(*base_, sm_col_, rho, rhs);
    w = rhs;
  }
}

void LinearizedStepper::propagate(Vec& w, double t0, int nsteps) const {
  std::vector<Vec*> block{&w};
  for (int k = 0; k < nsteps; ++k) step_block(block, t0 + k * dt_);
}

void LinearizedStepper::propagate_block(std::vector<Vec>& ws, double t0, int nsteps) const {
  std::vector<Vec*> block;
  block.reserve(ws.size());
  for (Vec& w : ws) block.push_back(&w);
  for (int k = 0; k < nsteps; ++k) step_block(block, t0 + k * dt_);
}

UniformCubicInterp::UniformCubicInterp(double t0, double dt, Vec samples, bool periodic)
    : t0_(t0), dt_(dt), y_(std::move(samples)), periodic_(periodic) {
  if (y_.size() < 2) throw std::invalid_argument("UniformCubicInterp: needs >= 2 samples");
}

double UniformCubicInterp::operator()(double t) const {
  const long n = static_cast<long>(y_.size());
  double s = (t - t0_) / dt_;
  long j;
  double tau;
  auto idx = [&](long i) -> double {
    if (periodic_) {
      long m = i % n;
      if (m < 0) m += n;
      return y_[m];
    }
    return y_[std::clamp<long>(i, 0, n - 1)];
  };
  if (periodic_) {
    s = std::fmod(s, static_cast<double>(n));
    if (s < 0) s += n;
    j = static_cast<long>(std::floor(s));
    tau = s - j;
  } else {
    j = std::clamp<long>(static_cast<long>(std::floor(s)), 0, n - 2);
    tau = s - j;
  }
  const double ym = idx(j - 1), y0 = idx(j), y1 = idx(j + 1), y2 = idx(j + 2);
  return y0 + 0.5 * tau * (y1 - ym +
                           tau * (2.0 * ym - 5.0 * y0 + 4.0 * y1 - y2 +
                                  tau * (3.0 * (y0 - y1) + y2 - ym)));
}

}  // namespace halfline
