#include "halfline/connections.hpp"

#include <cmath>

#include "halfline/special.hpp"
#include "halfline/spectra.hpp"
#include "halfline/volterra.hpp"

namespace halfline {

std::vector<FluxZero> flux_zeros(const FluxModel& f) {
  const int nsamp = 8192;
  const double root_tol = 1e-12;
  std::vector<FluxZero> zeros;
  auto push_zero = [&](double u, bool dbl) {
    double w = std::fmod(u, two_pi);
    if (w < 0) w += two_pi;
    for (const FluxZero& z : zeros)
      if (std::abs(z.u - w) < 1e-7 || std::abs(std::abs(z.u - w) - two_pi) < 1e-7) return;
    zeros.push_back({w, f.deriv(w), dbl});
  };
  double up = 0.0, gp = f.eval(0.0);
  for (int i = 1; i <= nsamp; ++i) {
    const double u = two_pi * i / nsamp;
    const double gv = f.eval(u);
    if (gp == 0.0) push_zero(up, std::abs(f.deriv(up)) < 1e-8);
    if (gp * gv < 0.0) {
      const double r = brent([&f](double x) { return f.eval(x); }, up, u, root_tol);
      push_zero(r, false);
    }
    up = u;
    gp = gv;
  }
  // tangential zeros: minima of |g| that touch zero without a sign change
  for (int i = 0; i <= nsamp; ++i) {
    const double u = two_pi * i / nsamp;
    if (std::abs(f.eval(u)) < 1e-4) {
      // polish the critical point of g
      double uc = u;
      for (int it = 0; it < 60; ++it) {
        const double d2 = f.deriv2(uc);
        if (d2 == 0.0) break;
        const double step = f.deriv(uc) / d2;
        uc -= step;
        if (std::abs(step) < 1e-14) break;
      }
      if (std::abs(f.eval(uc)) < 1e-9) push_zero(uc, true);
    }
  }
  std::sort(zeros.begin(), zeros.end(), [](const FluxZero& a, const FluxZero& b) { return a.u < b.u; });
  return zeros;
}

std::vector<ZeroPair> find_zero_pairs(const FluxModel& f) {
  const std::vector<FluxZero> zs = flux_zeros(f);
  std::vector<ZeroPair> pairs;
  if (zs.empty()) return pairs;
  auto make_pair = [&](const FluxZero& a, const FluxZero& b, double shift_a) {
    ZeroPair p;
    p.y1 = a.u + shift_a;
    p.y2 = b.u;
    p.gprime_y1 = a.gprime;
    p.gprime_y2 = b.gprime;
    p.degenerate = a.double_zero || b.double_zero;
    const double mid = 0.5 * (p.y1 + p.y2);
    const double gm = f.eval(mid);
    p.sign_between = gm > 0 ? 1 : (gm < 0 ? -1 : 0);
    return p;
  };
  if (zs.size() == 1) {
    // homoclinic up to the gauge: the zero paired with its own gauge copy
    pairs.push_back(make_pair(zs[0], zs[0], -two_pi));
    return pairs;
  }
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) pairs.push_back(make_pair(zs[i], zs[i + 1], 0.0));
  // wrap-around pair: last zero to the gauge copy of the first
  ZeroPair wrap;
  wrap.y1 = zs.back().u;
  wrap.y2 = zs.front().u + two_pi;
  wrap.gprime_y1 = zs.back().gprime;
  wrap.gprime_y2 = zs.front().gprime;
  wrap.degenerate = zs.back().double_zero || zs.front().double_zero;
  const double gm = f.eval(0.5 * (wrap.y1 + wrap.y2));
  wrap.sign_between = gm > 0 ? 1 : (gm < 0 ? -1 : 0);
  pairs.push_back(wrap);
  return pairs;
}

ConnectionRecord compute_heteroclinic(const ZeroPair& pair, const Params& p,
                                      const HetOptions& opt) {
  ConnectionRecord rec;
  rec.pair = pair;
  rec.c = p.c;
  const double gap = pair.y2 - pair.y1;
  if (!(gap > 0.0)) {
    rec.message = "compute_heteroclinic: empty pair";
    return rec;
  }
  // direction per the sign of g between the zeros: g > 0 descends from y2,
  // g < 0 ascends from y1
  rec.increasing = pair.sign_between < 0;
  const double y_back = rec.increasing ? pair.y1 : pair.y2;
  const double y_fwd = rec.increasing ? pair.y2 : pair.y1;
  const double delta = 1.0 / opt.ramp_n;

  const double L = opt.L > 0 ? opt.L : (p.c > 0 ? std::max(10.0, 12.0 / p.c) : 60.0);
  auto grid = std::make_shared<Grid1D>(Grid1D::tanh_clustered(L, opt.n, 2.0));
  Vec u0(grid->n());
  const double head = y_back + (rec.increasing ? delta : -delta);
  const double slope = p.flux.eval(head);
  for (std::size_t i = 0; i < u0.size(); ++i) {
    const double ramp = head + slope * grid->nodes[i];
    u0[i] = rec.increasing ? std::max(ramp, y_back) : std::min(ramp, y_back);
  }

  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(0.0));
  EvolveConfig cfg;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  cfg.newton_tol = 1e-11;
  FluxStepper st(grid, spec, cfg);
  st.set_state(0.0, u0);

  Trajectory traj;
  traj.grid = grid;
  traj.snapshots.push_back({0.0, u0});
  traj.trace.push_back({0.0, u0[0], boundary_derivative(*grid, u0)});

  const double reach_tol = opt.reach_fraction * gap;
  const double du0_target = opt.target_du0 > 0 ? opt.target_du0 : gap / 2500.0;
  const double band = opt.active_band * gap;
  double dt_cur = opt.dt;
  const double dt_cap = opt.t_max / 200.0;
  double last_snap_t = 0.0;
  int rejections = 0;
  bool reached = false;
  while (st.time() < opt.t_max) {
    const double t_prev = st.time();
    const Vec u_prev = st.state();
    if (!st.try_step(dt_cur)) {
      st.set_state(t_prev, u_prev);
      dt_cur *= 0.5;
      if (++rejections > 60 || dt_cur < 1e-14) break;
      continue;
    }
    traj.trace.push_back({st.time(), st.boundary_value(), st.boundary_slope()});
    traj.bc_residual_max = std::max(traj.bc_residual_max, st.bc_residual());
    const double u0b = st.boundary_value();
    const bool active = std::abs(u0b - pair.y1) > band && std::abs(u0b - pair.y2) > band;
    const double snap_dt = active ? opt.snapshot_dt : opt.snapshot_dt * opt.idle_factor;
    if (st.time() - last_snap_t >= snap_dt * (1.0 - 1e-9)) {
      traj.snapshots.push_back({st.time(), st.state()});
      last_snap_t = st.time();
    }
    if (std::abs(u0b - y_fwd) <= reach_tol) {
      reached = true;
      break;
    }
    const double moved = std::abs(u0b - u_prev[0]);
    const double ratio = moved > 0.0 ? du0_target / moved : 2.0;
    dt_cur = std::min(dt_cur * std::clamp(ratio, 0.5, 2.0), dt_cap);
    dt_cur = std::min(dt_cur, 0.45 * opt.snapshot_dt);
  }
  if (traj.snapshots.back().t != st.time()) traj.snapshots.push_back({st.time(), st.state()});

  // recentering time: first crossing of the midpoint
  const double mid = 0.5 * (pair.y1 + pair.y2);
  rec.t_half = -1.0;
  for (std::size_t j = 1; j < traj.trace.size(); ++j) {
    const double a = traj.trace[j - 1].u0 - mid, b = traj.trace[j].u0 - mid;
    if (a == 0.0 || a * b < 0.0) {
      const double w = a / (a - b);
      rec.t_half = traj.trace[j - 1].t + w * (traj.trace[j].t - traj.trace[j - 1].t);
      break;
    }
  }

  // confinement and temporal monotonicity over the stored data
  rec.confinement_lo = std::numeric_limits<double>::infinity();
  rec.confinement_hi = -std::numeric_limits<double>::infinity();
  for (const Snapshot& s : traj.snapshots) {
    if (s.t <= 0.0) continue;
    for (double v : s.values) {
      rec.confinement_lo = std::min(rec.confinement_lo, v);
      rec.confinement_hi = std::max(rec.confinement_hi, v);
    }
  }
  rec.monotone_in_time = true;
  for (std::size_t j = 1; j < traj.trace.size(); ++j) {
    const double d = traj.trace[j].u0 - traj.trace[j - 1].u0;
    if ((rec.increasing && d < -1e-10) || (!rec.increasing && d > 1e-10))
      rec.monotone_in_time = false;
  }

  // backward rate: fitted departure exponent against the spectral value
  if (!pair.degenerate) {
    const double gpb = rec.increasing ? pair.gprime_y1 : pair.gprime_y2;
    rec.rates.backward_theory = gpb * gpb - gpb * p.c;
    Vec ts, ys;
    for (const TracePoint& tp : traj.trace) {
      const double d = std::abs(tp.u0 - y_back);
      if (d >= 1.6 * delta && d <= std::min(0.05 * gap, 25.0 * delta)) {
        ts.push_back(tp.t);
        ys.push_back(std::log(d));
      }
    }
    if (ts.size() >= 6) rec.rates.backward_fit = linear_fit(ts, ys).second;
  }

  rec.trajectory = std::move(traj);
  rec.ok = reached && rec.t_half >= 0.0;
  if (!rec.ok)
    rec.message = reached ? "midpoint crossing not found"
                          : "no traversal within t_max (direction auto-selected from the sign of g)";
  return rec;
}

namespace {

double window_distance(const Trajectory& a, double ta_c, const Trajectory& b, double tb_c,
                       double x_max, double t_lo, double t_hi, double s) {
  double worst = 0.0;
  bool any = false;
  for (const Snapshot& sa : a.snapshots) {
    const double trel = sa.t - ta_c;
    if (trel < t_lo || trel > t_hi) continue;
    const double tb = tb_c + trel + s;
    // locate bracketing snapshots of b
    if (b.snapshots.empty() || tb < b.snapshots.front().t || tb > b.snapshots.back().t)
      return std::numeric_limits<double>::infinity();
    std::size_t lo = 0, hi = b.snapshots.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid2 = (lo + hi) / 2;
      (b.snapshots[mid2].t <= tb ? lo : hi) = mid2;
    }
    const double denom = b.snapshots[hi].t - b.snapshots[lo].t;
    const double w = denom > 0 ? (tb - b.snapshots[lo].t) / denom : 0.0;
    any = true;
    for (std::size_t i = 0; i < sa.values.size(); ++i) {
      if (a.grid->nodes[i] > x_max) break;
      const double bv = (1.0 - w) * b.snapshots[lo].values[i] + w * b.snapshots[hi].values[i];
      worst = std::max(worst, std::abs(sa.values[i] - bv));
    }
  }
  return any ? worst : std::numeric_limits<double>::infinity();
}

}  // namespace

double translate_distance(const Trajectory& a, double ta_c, const Trajectory& b, double tb_c,
                          double x_max, double t_lo, double t_hi, double* best_shift) {
  if (a.grid->n() != b.grid->n())
    throw std::invalid_argument("translate_distance: grids differ");
  const double span = 0.5 * (t_hi - t_lo) + 2.0;
  double best_s = 0.0, best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 80; ++i) {
    const double s = -span + 2.0 * span * i / 80.0;
    const double d = window_distance(a, ta_c, b, tb_c, x_max, t_lo, t_hi, s);
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  if (!std::isfinite(best_d)) {
    if (best_shift) *best_shift = 0.0;
    return best_d;
  }
  // golden-section polish around the coarse minimum
  double lo = best_s - 2.0 * span / 80.0, hi = best_s + 2.0 * span / 80.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = window_distance(a, ta_c, b, tb_c, x_max, t_lo, t_hi, x1);
  double f2 = window_distance(a, ta_c, b, tb_c, x_max, t_lo, t_hi, x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = window_distance(a, ta_c, b, tb_c, x_max, t_lo, t_hi, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = window_distance(a, ta_c, b, tb_c, x_max, t_lo, t_hi, x2);
    }
  }
  const double s_fin = f1 < f2 ? x1 : x2;
  const double d_fin = std::min(f1, f2);
  if (best_shift) *best_shift = s_fin;
  return std::min(d_fin, best_d);
}

double translate_distance(const ConnectionRecord& a, const ConnectionRecord& b, double x_max,
                          double t_lo, double t_hi, double* best_shift) {
  return translate_distance(a.trajectory, a.t_half, b.trajectory, b.t_half, x_max, t_lo, t_hi,
                            best_shift);
}

double supersol_trace(double t, double c, double lambda, double gamma, double k) {
  if (t <= 0.0) return 1.0 / (k * k);
  // initial-condition term of the printed defining integral
  const double xmax = 12.0 * std::sqrt(t) + 2.0;
  const double term1 =
      (2.0 / (k * k)) *
      integrate([&](double x) { return heat_kernel(x, t, c) * std::exp(-0.5 * c * x); }, 0.0,
                xmax, 192);
  const double term2 =
      flux_response(0.0, t, c,
                    [&](double s) { return (gamma / (k * k)) * std::exp(lambda * s); }, 192);
  return term1 + term2;
}

ProblemSpec supersol_problem(double c, double lambda, double gamma, double k, FarBC far) {
  ProblemSpec spec;
  spec.advection = [c](double) { return c; };
  spec.reaction = [](double) { return 0.0; };
  const double amp = gamma / (k * k);
  spec.flux = [amp, lambda](double, double t) { return -amp * std::exp(lambda * t); };
  spec.flux_du = [](double, double) { return 0.0; };
  spec.far = far;
  return spec;
}

SupersolLadder supersol_ladder(double c, double gprime0, const std::vector<double>& k_list,
                               double eps) {
  SupersolLadder lad;
  lad.c = c;
  lad.gprime0 = gprime0;
  lad.eps = eps > 0 ? eps : 0.05 * std::max(1.0, std::abs(gprime0));
  lad.lambda = -0.25 * c * c + 4.0 * std::pow(0.5 * c - gprime0 + lad.eps, 2);
  if (!(lad.lambda > 0.0)) throw std::invalid_argument("supersol_ladder: lambda <= 0");
  lad.gamma = std::sqrt(0.25 * c * c + lad.lambda);

  for (double k : k_list) {
    SupersolRung rung;
    rung.k = k;
    rung.lower_bound = std::log(k - 1.0) / lad.lambda;
    auto f = [&](double t) { return supersol_trace(t, c, lad.lambda, lad.gamma, k) - 1.0 / k; };
    double hi = std::max(2.0 * rung.lower_bound, 1.0);
    while (f(hi) < 0.0 && hi < 1e6) hi *= 2.0;
    rung.T_k = brent(f, 1e-8, hi, 1e-11);
    const double eA = std::exp(lad.lambda * rung.T_k);
    rung.closed_form_gamma =
        (erf_c(0.5 * c * std::sqrt(rung.T_k)) + eA * erf_(lad.gamma * std::sqrt(rung.T_k))) /
        (k * k);
    rung.closed_form_gamma_sq =
        (erf_c(0.5 * c * std::sqrt(rung.T_k)) +
         eA * erf_(lad.gamma * lad.gamma * std::sqrt(rung.T_k))) /
        (k * k);
    const double oracle = supersol_trace(rung.T_k, c, lad.lambda, lad.gamma, k);
    lad.mismatch_gamma = std::max(lad.mismatch_gamma,
                                  std::abs(oracle - rung.closed_form_gamma) * k * k);
    lad.mismatch_gamma_sq = std::max(lad.mismatch_gamma_sq,
                                     std::abs(oracle - rung.closed_form_gamma_sq) * k * k);
    lad.rungs.push_back(rung);
  }
  return lad;
}

A0Spectrum a0_spectrum(double c, double gprime0) {
  A0Spectrum s;
  s.c = c;
  s.gprime0 = gprime0;
  s.essential_edge = -0.25 * c * c;
  const double sigma_c = gprime0 * gprime0 - gprime0 * c;
  if (sigma_c > s.essential_edge) {
    s.has_point = true;
    s.point_eigenvalue = sigma_c;
    s.eigenfunction_rate = std::sqrt(0.25 * c * c + sigma_c);
    s.eigenfunction_decaying = (0.5 * c - gprime0) > 0.0;
  }
  return s;
}

Trajectory orbit_window(const OrbitRecord& orbit, double half_width, double dt_snap,
                        const OrbitOptions& opt) {
  const Params p = orbit.params();
  const ProblemSpec spec = advection_diffusion_problem(p, FarBC::neumann(orbit.k_far));
  const int sub = std::max(1, static_cast<int>(std::ceil(dt_snap / opt.dt_refine)));
  const double dt = dt_snap / sub;

  EvolveConfig cfg;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  cfg.newton_tol = 1e-11;
  FluxStepper st(orbit.profile0.grid, spec, cfg);
  st.set_state(0.0, orbit.profile0.values);

  Trajectory out;
  out.grid = orbit.profile0.grid;
  const double t_end = orbit.T + half_width;
  const double t_first = orbit.T - half_width;
  long step = 0;
  while (st.time() < t_end - 0.5 * dt) {
    if (!st.try_step(dt)) throw std::runtime_error("orbit_window: step failure");
    ++step;
    const double t = st.time();
    out.trace.push_back({t - orbit.T, st.boundary_value() + two_pi,
                         st.boundary_slope()});
    if (t >= t_first - 1e-12 && step % sub == 0) {
      Vec v = st.state();
      for (double& x : v) x += two_pi;
      out.snapshots.push_back({t - orbit.T, std::move(v)});
    }
  }
  return out;
}

SnicScan snic_scan(double c, const Vec& theta_grid, const OrbitOptions& orbit_opt,
                   const HetOptions& het_opt) {
  SnicScan scan;
  // the theta = 1 homoclinic (double zero at pi, gauge pair (-pi, pi))
  Params p1(c, FluxModel::cosine(1.0));
  const std::vector<ZeroPair> pairs = find_zero_pairs(p1.flux);
  if (pairs.size() != 1) throw std::runtime_error("snic_scan: unexpected zero set at theta = 1");
  scan.homoclinic = compute_heteroclinic(pairs[0], p1, het_opt);

  for (double theta : theta_grid) {
    SnicRow row;
    row.theta = theta;
    Params p(c, FluxModel::cosine(theta));
    OrbitOptions oo = orbit_opt;
    oo.y_phase = 0.0;  // phase zero at the midpoint of (-pi, pi)
    const double L = oo.L > 0 ? oo.L : default_truncation(c, 0.0);
    auto grid = scan.homoclinic.trajectory.grid && oo.L == 0.0
                    ? scan.homoclinic.trajectory.grid
                    : std::make_shared<Grid1D>(Grid1D::tanh_clustered(L, oo.n, 2.0));
    Field u0 = Field::affine(grid, 1.0, 0.0);
    OrbitRecord rec = find_orbit_attract(p, u0, oo);
    if (!rec.ok) {
      scan.rows.push_back(row);
      continue;
    }
    row.T = rec.T;
    row.ok = true;
    if (scan.homoclinic.ok) {
      Trajectory win = orbit_window(rec, 6.5, 0.1, oo);
      row.window_distance = translate_distance(win, 0.0, scan.homoclinic.trajectory,
                                               scan.homoclinic.t_half, 5.0, -5.0, 5.0);
    }
    scan.rows.push_back(row);
  }
  return scan;
}

}  // namespace halfline
