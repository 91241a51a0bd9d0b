#include "halfline/orbit.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <cstdlib>

#include "halfline/mode_rates.hpp"
#include "halfline/special.hpp"

namespace halfline {

namespace {

// ---------------------------------------------------------------- utilities

struct DerivStencil {
  double d0[3], dl[3];
};

DerivStencil stencils(const Grid1D& g) {
  DerivStencil s{};
  const std::size_t n = g.n();
  const double h1 = g.nodes[1] - g.nodes[0], h2 = g.nodes[2] - g.nodes[1];
  s.d0[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
  s.d0[1] = (h1 + h2) / (h1 * h2);
  s.d0[2] = -h1 / (h2 * (h1 + h2));
  const double e1 = g.nodes[n - 1] - g.nodes[n - 2], e2 = g.nodes[n - 2] - g.nodes[n - 3];
  s.dl[0] = (2.0 * e1 + e2) / (e1 * (e1 + e2));
  s.dl[1] = -(e1 + e2) / (e1 * e2);
  s.dl[2] = e1 / (e2 * (e1 + e2));
  return s;
}

// du/dt evaluated from the spatial operator, consistent with the boundary
// constraints (node 0 from the differentiated flux condition, far node from
// the differentiated far condition).
Vec time_derivative(const Grid1D& g, const ProblemSpec& spec, const Vec& u, double t) {
  const std::size_t n = g.n();
  Vec w(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.nodes[i] - g.nodes[i - 1];
    const double hp = g.nodes[i + 1] - g.nodes[i];
    const double uxx = 2.0 * (hm * u[i + 1] - (hm + hp) * u[i] + hp * u[i - 1]) /
                       (hm * hp * (hm + hp));
    const double ux = (-hp / (hm * (hm + hp))) * u[i - 1] + ((hp - hm) / (hm * hp)) * u[i] +
                      (hm / (hp * (hm + hp))) * u[i + 1];
    const double a = spec.advection ? spec.advection(g.nodes[i]) : 0.0;
    const double r = spec.reaction ? spec.reaction(g.nodes[i]) : 0.0;
    w[i] = uxx - a * ux - r * u[i];
  }
  const DerivStencil s = stencils(g);
  const double gp = spec.flux_du(u[0], t);
  w[0] = (s.d0[1] * w[1] + s.d0[2] * w[2]) / (gp - s.d0[0]);
  switch (spec.far.kind) {
    case FarBC::Kind::dirichlet_zero:
      w[n - 1] = 0.0;
      break;
    case FarBC::Kind::neumann_strain:
      w[n - 1] = -(s.dl[1] * w[n - 2] + s.dl[2] * w[n - 3]) / s.dl[0];
      break;
    case FarBC::Kind::robin_decay:
      w[n - 1] = -(s.dl[1] * w[n - 2] + s.dl[2] * w[n - 3]) / (s.dl[0] - spec.far.robin_coeff);
      break;
  }
  return w;
}

struct FlowResult {
  Vec uT;
  Vec trace;  // boundary values at j * dt, j = 0..nsteps
  std::vector<Snapshot> slices;
  double dt = 0.0;
  int nsteps = 0;
  bool ok = false;
};

FlowResult flow_period(const ProblemSpec& spec, std::shared_ptr<const Grid1D> grid, const Vec& u0,
                       double T, double dt_target, int snap_every = 0) {
  FlowResult out;
  for (int attempt = 0; attempt < 3; ++attempt) {
    int N = std::max(48, static_cast<int>(std::ceil(T / dt_target)));
    if (snap_every > 0) N = ((N + snap_every - 1) / snap_every) * snap_every;
    const double dt = T / N;
    EvolveConfig cfg;
    cfg.scheme = EvolveConfig::Scheme::implicit_newton;
    cfg.newton_tol = 1e-11;
    cfg.newton_maxit = 20;
    FluxStepper st(grid, spec, cfg);
    st.set_state(0.0, u0);
    out.trace.assign(N + 1, 0.0);
    out.trace[0] = u0[0];
    out.slices.clear();
    if (snap_every > 0) out.slices.push_back({0.0, u0});
    bool failed = false;
    for (int j = 1; j <= N; ++j) {
      if (!st.try_step(dt)) {
        failed = true;
        break;
      }
      out.trace[j] = st.boundary_value();
      if (snap_every > 0 && j % snap_every == 0) out.slices.push_back({st.time(), st.state()});
    }
    if (!failed) {
      out.uT = st.state();
      out.dt = dt;
      out.nsteps = N;
      out.ok = true;
      return out;
    }
    dt_target *= 0.5;
  }
  return out;
}

}  // namespace

namespace detail {

// GMRES without restarts (modified Gram-Schmidt + Givens rotations).
double gmres_solve(const std::function<Vec(const Vec&)>& matvec, const Vec& b, Vec& x, int maxit,
                   double rel_tol) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bnorm == 0.0) return 0.0;
  std::vector<Vec> V;
  V.push_back(b);
  for (double& v : V[0]) v /= bnorm;
  std::vector<Vec> H;  // H[j] holds column j (j+2 entries)
  Vec cs, sn, beta;
  beta.assign(1, bnorm);
  double resid = bnorm;
  int j = 0;
  for (; j < maxit; ++j) {
    Vec w = matvec(V[j]);
    Vec hcol(j + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      double hij = std::inner_product(w.begin(), w.end(), V[i].begin(), 0.0);
      hcol[i] = hij;
      for (std::size_t q = 0; q < n; ++q) w[q] -= hij * V[i][q];
    }
    hcol[j + 1] = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (hcol[j + 1] > 1e-300)
      for (double& v : w) v /= hcol[j + 1];
    // apply previous Givens rotations
    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
      hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
      hcol[i] = t;
    }
    const double denom = std::hypot(hcol[j], hcol[j + 1]);
    cs.push_back(hcol[j] / denom);
    sn.push_back(hcol[j + 1] / denom);
    hcol[j] = denom;
    hcol[j + 1] = 0.0;
    beta.push_back(-sn[j] * beta[j]);
    beta[j] *= cs[j];
    H.push_back(hcol);
    resid = std::abs(beta[j + 1]);
    V.push_back(std::move(w));
    if (resid <= rel_tol * bnorm) {
      ++j;
      break;
    }
  }
  // back substitution on the j x j triangular system
  Vec y(j, 0.0);
  for (int i = j - 1; i >= 0; --i) {
    double s = beta[i];
    for (int k = i + 1; k < j; ++k) s -= H[k][i] * y[k];
    y[i] = s / H[i][i];
  }
  for (int k = 0; k < j; ++k)
    for (std::size_t q = 0; q < n; ++q) x[q] += y[k] * V[k][q];
  return resid / bnorm;
}

}  // namespace detail

namespace {

using detail::gmres_solve;

double estimate_horizon(const Params& p, const OrbitOptions& opt) {
  if (opt.t_end > 0.0) return opt.t_end;
  const double gmin = p.flux.min_value();
  if (gmin > 0.0 && p.c > 0.0)
    return (opt.max_periods + 2.0) * 4.0 * pi / (p.c * gmin);
  return 500.0 / std::max(p.c, 1e-2) + 500.0;
}

// residual of the return map F(u~0, T) = u~(T) - u~0 + 2 pi e^{-c x/2} in
// the weighted sup norm of X_+ (the natural norm of Y_c)
double weighted_return_residual(const Grid1D& g, double c, const Vec& uT, const Vec& u0) {
  double r = 0.0;
  for (std::size_t i = 0; i < u0.size(); ++i)
    r = std::max(r, std::exp(-0.5 * c * g.nodes[i]) * std::abs(uT[i] - u0[i] + two_pi));
  return r;
}

void fill_diagnostics(OrbitRecord& rec, const ProblemSpec& spec, const OrbitOptions& opt) {
  FlowResult flow =
      flow_period(spec, rec.profile0.grid, rec.profile0.values, rec.T, opt.dt_refine, 0);
  if (!flow.ok) return;
  rec.residual =
      weighted_return_residual(*rec.profile0.grid, rec.c, flow.uT, rec.profile0.values);
  rec.max_dtu0 = -std::numeric_limits<double>::infinity();
  for (int jj = 0; jj + 1 <= flow.nsteps; ++jj)
    rec.max_dtu0 = std::max(rec.max_dtu0, (flow.trace[jj + 1] - flow.trace[jj]) / flow.dt);
  // gradient range over ~16 slices of one period
  FlowResult sl = flow_period(spec, rec.profile0.grid, rec.profile0.values, rec.T, opt.dt_refine,
                              std::max(1, flow.nsteps / 16));
  rec.min_slope = std::numeric_limits<double>::infinity();
  rec.max_slope = -std::numeric_limits<double>::infinity();
  for (const Snapshot& s : sl.slices) {
    const Vec d = derivative_samples(*rec.profile0.grid, s.values);
    for (double x : d) {
      rec.min_slope = std::min(rec.min_slope, x);
      rec.max_slope = std::max(rec.max_slope, x);
    }
  }
}

}  // namespace

OrbitRecord find_orbit_attract(const Params& p, const Field& u0, const OrbitOptions& opt) {
  OrbitRecord rec;
  rec.c = p.c;
  rec.flux = p.flux;
  rec.y_phase = opt.y_phase;
  rec.k_far = u0.farfield.strain;
  if (!(p.c > 0.0)) {
    rec.message = "find_orbit_attract: requires c > 0";
    return rec;
  }

  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(rec.k_far));
  EvolveConfig cfg;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  cfg.newton_tol = 1e-11;
  FluxStepper st(u0.grid, spec, cfg);
  st.set_state(0.0, u0.values);

  const double horizon = estimate_horizon(p, opt);
  const double base = u0.values[0];
  double dt_cur = opt.dt;
  const double dt_cap = opt.target_du0 > 0.0 ? opt.dt * 1e4 : opt.dt;
  int rejections = 0;

  std::vector<double> crossings;
  Vec last_profile;
  double next_level = base + two_pi * (std::ceil((u0.values[0] - base) / two_pi) - 1.0);

  double t_prev = 0.0;
  Vec u_prev = u0.values;
  bool settled = false;
  while (st.time() < horizon && !settled) {
    t_prev = st.time();
    u_prev = st.state();
    if (!st.try_step(dt_cur)) {
      ++rejections;
      dt_cur *= 0.5;
      st.set_state(t_prev, u_prev);
      if (rejections > 40 || dt_cur < 1e-14) {
        rec.message = "find_orbit_attract: step failures";
        return rec;
      }
      continue;
    }
    const double dt_used = st.time() - t_prev;
    if (st.boundary_value() <= next_level) {
      // crossing between t_prev and now: locate by a Brent solve in the
      // substep length
      FluxStepper probe(u0.grid, spec, cfg);
      const double level = next_level;
      auto phi = [&](double dtx) {
        if (dtx <= 0.0) return u_prev[0] - level;
        probe.set_state(t_prev, u_prev);
        if (!probe.try_step(dtx)) return std::numeric_limits<double>::quiet_NaN();
        return probe.boundary_value() - level;
      };
      double dtx = dt_used;
      try {
        dtx = brent(phi, 0.0, dt_used, 1e-13 * std::max(1.0, dt_used));
      } catch (const std::exception&) {
        // keep the step end as the crossing estimate
      }
      probe.set_state(t_prev, u_prev);
      probe.try_step(dtx);
      crossings.push_back(t_prev + dtx);
      last_profile = probe.state();
      const double shift = base - level;
      for (double& v : last_profile) v += shift;
      next_level -= two_pi;

      const std::size_t m = crossings.size();
      if (m >= static_cast<std::size_t>(opt.min_periods) + 1) {
        const double Tm = crossings[m - 1] - crossings[m - 2];
        const double Tp = crossings[m - 2] - crossings[m - 3];
        if (std::abs(Tm - Tp) <= opt.settle_rel_tol * Tm) settled = true;
      }
      if (m >= static_cast<std::size_t>(opt.max_periods)) break;
    }
    if (opt.target_du0 > 0.0) {
      const double moved = std::abs(st.boundary_value() - u_prev[0]);
      const double ratio = moved > 0.0 ? opt.target_du0 / moved : 2.0;
      dt_cur = std::min(dt_cur * std::clamp(ratio, 0.5, 2.0), dt_cap);
    }
  }

  if (crossings.size() < 2) {
    rec.message = crossings.empty()
                      ? "no periodic orbit: no gauge drop of the boundary trace within the horizon"
                      : "no periodic orbit: single gauge drop within the horizon";
    return rec;
  }

  rec.T = crossings.back() - crossings[crossings.size() - 2];
  rec.omega = two_pi / rec.T;
  rec.strain = rec.omega / p.c;
  const double L = u0.grid->length();
  auto [b, k] = fit_affine_window(*u0.grid, last_profile, 0.35 * L, 0.7 * L);
  rec.profile0 = Field(u0.grid, last_profile, FarField{k, b});
  rec.ok = true;
  if (!settled) rec.message = "period not settled to tolerance within max_periods";
  fill_diagnostics(rec, spec, opt);
  return rec;
}

OrbitRecord refine_orbit_newton(const OrbitRecord& seed, const OrbitOptions& opt) {
  OrbitRecord rec = seed;
  rec.ok = false;
  if (!(seed.T > 0.0) || seed.profile0.n() == 0) {
    rec.message = "refine_orbit_newton: invalid seed";
    return rec;
  }
  const Params p = seed.params();
  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(seed.k_far));
  auto grid = seed.profile0.grid;
  const std::size_t n = grid->n();

  Vec u = seed.profile0.values;
  double T = seed.T;

  double best_res = std::numeric_limits<double>::infinity();
  Vec best_u = u;
  double best_T = T;
  int iters_used = 0;

  // weighted coordinates throughout: the return map lives in X_+ and the
  // monodromy is nearly normal there (unweighted it has eigenbasis condition
  // ~ e^{c L / 2} and Krylov iterations stall)
  Vec wgt(n), iwgt(n);
  for (std::size_t i = 0; i < n; ++i) {
    wgt[i] = std::exp(-0.5 * p.c * grid->nodes[i]);
    iwgt[i] = 1.0 / wgt[i];
  }

  for (int it = 0; it < opt.newton_maxit; ++it) {
    FlowResult flow = flow_period(spec, grid, u, T, opt.dt_refine, 0);
    if (!flow.ok) {
      rec.message = "refine_orbit_newton: flow integration failed";
      return rec;
    }
    Vec R(n);
    for (std::size_t i = 0; i < n; ++i) R[i] = wgt[i] * (flow.uT[i] - u[i] + two_pi);
    const double rn = sup_norm(R);
    if (rn < best_res) {
      best_res = rn;
      best_u = u;
      best_T = T;
    }
    if (rn <= opt.newton_tol) break;
    iters_used = it + 1;

    Monodromy M(grid, spec, flow.dt, flow.nsteps, flow.trace);
    const Vec udot = time_derivative(*grid, spec, flow.uT, T);

    // unknown packing is index-aligned with the residual rows (slot 0, the
    // pinned phase node, carries dT) so the identity part of the Jacobian
    // stays on the diagonal and the Krylov solve converges in a few steps
    auto matvec = [&](const Vec& v) {
      Vec wfull(n, 0.0);
      for (std::size_t i = 1; i < n; ++i) wfull[i] = iwgt[i] * v[i];
      Vec mw = wfull;
      M.apply(mw);
      Vec out(n);
      for (std::size_t i = 0; i < n; ++i)
        out[i] = wgt[i] * (mw[i] - wfull[i] + v[0] * udot[i]);
      return out;
    };
    Vec b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = -R[i];
    Vec dx;
    gmres_solve(matvec, b, dx, opt.gmres_maxit, opt.gmres_tol);
    for (std::size_t i = 1; i < n; ++i) u[i] += iwgt[i] * dx[i];
    T += dx[0];
    if (!(T > 0.2 * seed.T) || !(T < 5.0 * seed.T) || !all_finite(u)) {
      rec.message = "refine_orbit_newton: iterate left the trust region";
      u = best_u;
      T = best_T;
      break;
    }
  }

  {
    FlowResult flow = flow_period(spec, grid, u, T, opt.dt_refine, 0);
    if (flow.ok) {
      const double rn = weighted_return_residual(*grid, p.c, flow.uT, u);
      if (rn < best_res) {
        best_res = rn;
        best_u = u;
        best_T = T;
      }
    }
  }

  rec.T = best_T;
  rec.omega = two_pi / rec.T;
  rec.strain = p.c > 0 ? rec.omega / p.c : 0.0;
  const double L = grid->length();
  auto [bb, kk] = fit_affine_window(*grid, best_u, 0.35 * L, 0.7 * L);
  rec.profile0 = Field(grid, best_u, FarField{kk, bb});
  rec.residual = best_res;
  rec.newton_iterations = iters_used;
  rec.ok = best_res <= std::max(opt.newton_tol, 1e-8);
  if (!rec.ok) rec.message = "refine_orbit_newton: stagnated at residual " + std::to_string(best_res);
  fill_diagnostics(rec, spec, opt);
  if (opt.compute_floquet) {
    FloquetResult fr = orbit_floquet(rec, opt.floquet_m, opt);
    rec.floquet = fr.multipliers;
  }
  return rec;
}

FloquetResult orbit_floquet(const OrbitRecord& orbit, int m, const OrbitOptions& opt) {
  const Params p = orbit.params();
  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(orbit.k_far));
  auto grid = orbit.profile0.grid;
  FlowResult flow = flow_period(spec, grid, orbit.profile0.values, orbit.T, opt.dt_refine, 0);
  if (!flow.ok) throw std::runtime_error("orbit_floquet: flow integration failed");
  Monodromy M(grid, spec, flow.dt, flow.nsteps, flow.trace);
  Vec seed = time_derivative(*grid, spec, orbit.profile0.values, 0.0);
  for (double& x : seed) x = -x;
  FloquetResult fr = floquet_multipliers(M, m, p.c, *grid, &seed);
  // alignment of the leading eigenvector with -d/dt u~(., 0)
  Vec ref = seed;
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] *= std::exp(-0.5 * p.c * grid->nodes[i]);
  if (!fr.leading_vector_weighted.empty())
    fr.alignment_angle = weighted_angle(fr.leading_vector_weighted, ref, *grid, 0.0);
  return fr;
}

std::vector<BranchPoint> continue_branch(double c, const Vec& theta_grid,
                                         const OrbitOptions& opt) {
  if (theta_grid.empty() || theta_grid.front() != 0.0)
    throw std::invalid_argument("continue_branch: theta grid must start at 0");
  const double L = opt.L > 0 ? opt.L : default_truncation(c, 0.0);
  auto grid = std::make_shared<Grid1D>(
      opt.clustered ? Grid1D::tanh_clustered(L, opt.n, opt.cluster_alpha)
                    : Grid1D::uniform(L, opt.n));

  std::vector<BranchPoint> branch;

  // exact orbit of the constant flux: u = x - c t (strain 1, T = 2 pi / c)
  OrbitRecord cur;
  cur.c = c;
  cur.flux = FluxModel::cosine(0.0);
  cur.T = two_pi / c;
  cur.y_phase = opt.y_phase;
  cur.k_far = 1.0;
  cur.profile0 = Field::affine(grid, 1.0, opt.y_phase);
  OrbitOptions corr = opt;
  corr.compute_floquet = false;
  cur = refine_orbit_newton(cur, corr);
  if (!cur.ok) throw std::runtime_error("continue_branch: refinement failed at theta = 0");

  double theta_cur = 0.0;
  bool have_prev = false;
  OrbitRecord prev = cur;
  double prev_step = 0.0;
  double step_try = 0.05;
  bool dead = false;

  for (double target : theta_grid) {
    if (dead) break;
    while (theta_cur < target - 1e-14) {
      const double step = std::min(step_try, target - theta_cur);
      OrbitRecord pred = cur;
      pred.flux = FluxModel::cosine(theta_cur + step);
      if (have_prev && prev_step > 0.0) {
        const double r = step / prev_step;
        Vec v = cur.profile0.values;
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] += r * (cur.profile0.values[i] - prev.profile0.values[i]);
        pred.profile0 = Field(cur.profile0.grid, v, cur.profile0.farfield);
        pred.T = cur.T + r * (cur.T - prev.T);
        pred.k_far = cur.k_far + r * (cur.k_far - prev.k_far);
      }
      OrbitRecord corrected = refine_orbit_newton(pred, corr);
      if (corrected.ok) {
        // self-consistent Neumann strain at the truncation
        const double k_new = corrected.omega / c;
        if (std::abs(k_new - corrected.k_far) > 1e-3) {
          corrected.k_far = k_new;
          corrected = refine_orbit_newton(corrected, corr);
        }
        if (corrected.ok) {
          prev = cur;
          prev_step = step;
          have_prev = true;
          cur = corrected;
          theta_cur += step;
          step_try = std::min(step_try * 1.4, 0.1);
          continue;
        }
      }
      step_try *= 0.5;
      if (step_try < 1e-4) {
        dead = true;
        break;
      }
    }
    if (std::abs(theta_cur - target) <= 1e-12) {
      BranchPoint bp;
      bp.theta = target;
      bp.orbit = cur;
      bp.continuation_step = prev_step;
      if (opt.compute_floquet) {
        FloquetResult fr = orbit_floquet(cur, opt.floquet_m, opt);
        bp.orbit.floquet = fr.multipliers;
      }
      branch.push_back(std::move(bp));
    }
  }
  return branch;
}

std::vector<ScanRow> strain_frequency_scan(double theta, const Vec& c_grid,
                                           const OrbitOptions& opt) {
  std::vector<ScanRow> rows;
  for (double c : c_grid) {
    ScanRow row;
    row.c = c;
    try {
      // initial strain guess from the two asymptotic regimes
      const double k0 = c < 0.25 ? (1.0 - theta) + small_c_strain_prefactor * std::sqrt(c)
                                 : std::sqrt(std::max(1.0 - theta * theta, 1e-8));
      const double omega0 = c * k0;
      OrbitOptions o = opt;
      double L, alpha = 0.0;
      if (c >= 0.3) {
        L = std::max(10.0, 12.0 / c) * 1.2;
      } else {
        const double decay = std::abs(mode_rates_real(1.0, omega0, c).eta_minus.real());
        L = std::clamp(10.0 / decay, 50.0, 2500.0);
        alpha = 4.0;
      }
      const double T0 = two_pi / omega0;
      std::size_t n = o.n;
      if (c >= 0.3) n = std::max<std::size_t>(n, static_cast<std::size_t>(1.1 * L * c));
      auto grid = std::make_shared<Grid1D>(alpha > 0.0 ? Grid1D::tanh_clustered(L, n, alpha)
                                                       : Grid1D::uniform(L, n));
      o.dt = std::min(T0 / 800.0, 0.05 * T0);
      o.target_du0 = two_pi / 1000.0;
      o.settle_rel_tol = std::max(opt.settle_rel_tol, 1e-5);
      o.min_periods = 2;
      o.max_periods = 40;
      Params p(c, FluxModel::cosine(theta));
      Field u0 = Field::affine(grid, k0, opt.y_phase);
      OrbitRecord rec = find_orbit_attract(p, u0, o);
      if (rec.ok) {
        // one self-consistency pass for the far-field strain
        Field warm(grid, rec.profile0.values, FarField{rec.omega / c, 0.0});
        OrbitOptions o2 = o;
        o2.min_periods = 2;
        o2.max_periods = 20;
        OrbitRecord rec2 = find_orbit_attract(p, warm, o2);
        if (rec2.ok) rec = rec2;
      }
      if (!rec.ok) {
        row.message = rec.message;
        rows.push_back(row);
        continue;
      }
      row.T = rec.T;
      row.omega = rec.omega;
      row.k = rec.strain;
      // the profile carries the outgoing wave of spatial wavelength c T with
      // weak decay at large c; measure the mean slope over an integer number
      // of wavelengths so the oscillation cancels
      const double wavelength = c * rec.T;
      const double span_avail = 0.55 * L;
      double x1 = 0.2 * L, x2 = 0.75 * L;
      const int waves = static_cast<int>(std::floor(span_avail / wavelength));
      if (waves >= 1) x2 = x1 + waves * wavelength;
      auto value_at = [&](double x) {
        const Vec& xs = grid->nodes;
        std::size_t lo = 0, hi = xs.size() - 1;
        while (hi - lo > 1) {
          const std::size_t mid = (lo + hi) / 2;
          (xs[mid] <= x ? lo : hi) = mid;
        }
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return (1.0 - w) * rec.profile0.values[lo] + w * rec.profile0.values[hi];
      };
      double kf;
      if (waves >= 1) {
        kf = (value_at(x2) - value_at(x1)) / (x2 - x1);
      } else {
        kf = fit_affine_window(*grid, rec.profile0.values, x1, x2).second;
      }
      row.k_fit = kf;
      row.k_fit_err = std::abs(kf - rec.strain);
      row.ok = true;
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<Snapshot> orbit_time_slices(const OrbitRecord& orbit, int n_slices,
                                        const OrbitOptions& opt) {
  const Params p = orbit.params();
  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(orbit.k_far));
  const int per = std::max(1, static_cast<int>(std::ceil(orbit.T / opt.dt_refine)) / n_slices);
  FlowResult flow =
      flow_period(spec, orbit.profile0.grid, orbit.profile0.values, orbit.T, opt.dt_refine, per);
  if (!flow.ok) throw std::runtime_error("orbit_time_slices: flow failed");
  return std::move(flow.slices);
}

std::vector<ModeDecayFit> orbit_tail_mode_fit(const OrbitRecord& orbit, const std::vector<int>& ks,
                                              const OrbitOptions& opt) {
  const int M = 64;
  std::vector<Snapshot> slices = orbit_time_slices(orbit, M, opt);
  // drop the final slice if it duplicates t = T (periodic image of t = 0)
  if (static_cast<int>(slices.size()) > M) slices.resize(M);
  const Grid1D& g = *orbit.profile0.grid;
  const std::size_t n = g.n();
  const double c = orbit.c, w = orbit.omega;

  std::vector<ModeDecayFit> fits;
  for (int k : ks) {
    // temporal DFT of the gauge-periodic part u + omega t, weighted
    Vec amp(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> acc(0.0, 0.0);
      for (int mth = 0; mth < static_cast<int>(slices.size()); ++mth) {
        const double phase = -two_pi * k * mth / static_cast<double>(slices.size());
        const double val = slices[mth].values[i] + w * slices[mth].t;
        acc += val * std::complex<double>(std::cos(phase), std::sin(phase));
      }
      acc /= static_cast<double>(slices.size());
      amp[i] = std::abs(acc) * std::exp(-0.5 * c * g.nodes[i]);
    }
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (g.nodes[i] >= 0.5) amax = std::max(amax, amp[i]);
    Vec xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.nodes[i];
      if (x < 0.75 || x > 0.6 * g.length()) continue;
      if (amp[i] < amax * 1e-8 || amp[i] <= 0.0) break;
      xs.push_back(x);
      ys.push_back(std::log(amp[i]));
    }
    ModeDecayFit f;
    f.k = k;
    f.predicted_rate = mode_rates(k, w, c).nu_minus.real();
    f.fitted_rate = xs.size() >= 4 ? linear_fit(xs, ys).second
                                   : std::numeric_limits<double>::quiet_NaN();
    fits.push_back(f);
  }
  return fits;
}

}  // namespace halfline
