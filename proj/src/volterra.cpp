#include "halfline/volterra.hpp"

#include <cmath>

#include "halfline/special.hpp"

namespace halfline {

namespace {

// 3-point Gauss-Legendre on [a, b]
constexpr double g3x = 0.7745966692414834;
constexpr double g3w0 = 0.5555555555555556;
constexpr double g3w1 = 0.8888888888888889;

template <class F>
double gl3(const F& f, double a, double b) {
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  return h * (g3w0 * f(m - h * g3x) + g3w1 * f(m) + g3w0 * f(m + h * g3x));
}

// evaluate a piecewise-linear trace on uniform times j*dt
struct LinearTrace {
  double dt;
  const Vec* w;
  double operator()(double s) const {
    const double r = s / dt;
    const long n = static_cast<long>(w->size());
    long j = std::clamp<long>(static_cast<long>(std::floor(r)), 0, n - 2);
    const double tau = r - j;
    return (1.0 - tau) * (*w)[j] + tau * (*w)[j + 1];
  }
};

// kernel factor of the q-substituted flux integral at x
inline double qkernel(double q, double x, double c) {
  if (q == 0.0) return x == 0.0 ? 1.0 : 0.0;
  return std::exp(-0.25 * c * c * q * q - 0.25 * x * x / (q * q));
}

}  // namespace

double flux_response(double x, double t, double c, const std::function<double(double)>& W,
                     int npanels) {
  if (!(t > 0.0)) return 0.0;
  const double qmax = std::sqrt(t);
  auto f = [&](double q) { return qkernel(q, x, c) * W(t - q * q); };
  double sum = 0.0;
  for (int p = 0; p < npanels; ++p) {
    const double a = qmax * p / npanels, b = qmax * (p + 1) / npanels;
    sum += gl3(f, a, b);
  }
  return 2.0 / std::sqrt(pi) * sum;
}

double initial_term(double x, double t, double c, const std::function<double(double)>& w0,
                    double ymax, int npanels) {
  auto f = [&](double y) { return (heat_kernel(x - y, t, c) + heat_kernel(x + y, t, c)) * w0(y); };
  double sum = 0.0;
  for (int p = 0; p < npanels; ++p) {
    const double a = ymax * p / npanels, b = ymax * (p + 1) / npanels;
    sum += gl3(f, a, b);
  }
  return sum;
}

Trajectory evolve_volterra(const Params& p, const Field& u0, double t_end, double dt,
                           std::size_t n_snapshots) {
  const double c = p.c;
  const FluxModel& g = p.flux;

  // weighted initial profile, extended affinely past the truncation
  const double L = u0.grid->length();
  const double k_far = u0.farfield.strain;
  const double uL = u0.values.back();
  auto u0_at = [&](double y) {
    if (y >= L) return uL + k_far * (y - L);
    const Vec& xs = u0.grid->nodes;
    std::size_t lo = 0, hi = xs.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (xs[mid] <= y ? lo : hi) = mid;
    }
    const double w = (y - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - w) * u0.values[lo] + w * u0.values[hi];
  };
  auto w0 = [&](double y) { return std::exp(-0.5 * c * y) * u0_at(y); };
  const double ymax = L + 12.0 * std::sqrt(std::max(t_end, 1.0)) + 4.0 / std::max(c, 0.25);

  // contraction bound for the per-step fixed point
  double sup_gp = 0.0;
  for (int i = 0; i < 512; ++i) sup_gp = std::max(sup_gp, std::abs(g.deriv(two_pi * i / 512)));
  const double lip = sup_gp + 0.5 * c;
  double dt_bound = 0.25 * pi / (4.0 * std::max(lip, lip * lip));
  if (!(dt_bound > 0.0) || !std::isfinite(dt_bound)) dt_bound = t_end / 64.0;
  if (dt <= 0.0) dt = std::min(t_end / 512.0, dt_bound);
  dt = std::min(dt, dt_bound);

  for (int attempt = 0; attempt < 4; ++attempt) {
    const std::size_t nsteps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(nsteps);
    Vec times(nsteps + 1), v(nsteps + 1), w(nsteps + 1);
    times[0] = 0.0;
    v[0] = u0.values[0];
    w[0] = g.eval(v[0]) - 0.5 * c * v[0];
    bool contraction_ok = true;

    for (std::size_t j = 1; j <= nsteps && contraction_ok; ++j) {
      const double t = j * h;
      times[j] = t;
      // history part: panels over s in [0, t-h] (q in [sqrt(h), sqrt(t)])
      LinearTrace trace{h, &w};
      double hist = 0.0;
      for (std::size_t i = 0; i + 1 < j; ++i) {
        const double qa = std::sqrt(t - times[i + 1]);
        const double qb = std::sqrt(t - times[i]);
        hist += gl3([&](double q) { return qkernel(q, 0.0, c) * trace(t - q * q); }, qa, qb);
      }
      const double i0 = initial_term(0.0, t, c, w0, ymax);
      // fixed point in v_j through the last panel (q in [0, sqrt(h)])
      double vj = v[j - 1];
      double prev_res = std::numeric_limits<double>::infinity();
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        w[j] = g.eval(vj) - 0.5 * c * vj;
        const double last =
            gl3([&](double q) { return qkernel(q, 0.0, c) * trace(t - q * q); }, 0.0, std::sqrt(h));
        const double v_new = i0 - 2.0 / std::sqrt(pi) * (hist + last);
        const double res = std::abs(v_new - vj);
        vj = v_new;
        if (res <= 1e-13 * std::max(1.0, std::abs(vj))) {
          converged = true;
          break;
        }
        if (it > 4 && res > prev_res) break;  // residual growing: not contracting
        prev_res = res;
      }
      if (!converged) {
        contraction_ok = false;
        break;
      }
      v[j] = vj;
      w[j] = g.eval(vj) - 0.5 * c * vj;
    }

    if (!contraction_ok) {
      dt *= 0.5;
      continue;
    }

    Trajectory traj;
    traj.grid = u0.grid;
    traj.trace.reserve(nsteps + 1);
    for (std::size_t j = 0; j <= nsteps; ++j) traj.trace.push_back({times[j], v[j], g.eval(v[j])});
    traj.bc_residual_max = 0.0;  // boundary condition holds by construction

    // snapshot reconstruction by kernel quadrature
    std::vector<double> snap_times;
    snap_times.push_back(0.0);
    for (std::size_t s = 1; s <= n_snapshots; ++s)
      snap_times.push_back(t_end * static_cast<double>(s) / n_snapshots);
    LinearTrace trace{h, &w};
    for (double ts : snap_times) {
      Vec vals(u0.grid->n());
      if (ts == 0.0) {
        vals = u0.values;
      } else {
        for (std::size_t i = 0; i < vals.size(); ++i) {
          const double x = u0.grid->nodes[i];
          const double iv = initial_term(x, ts, c, w0, ymax);
          // panel the flux integral on the trace grid for accuracy
          double acc = 0.0;
          const std::size_t jmax = static_cast<std::size_t>(std::round(ts / h));
          for (std::size_t i2 = 0; i2 < jmax; ++i2) {
            const double qa = std::sqrt(ts - std::min(ts, (i2 + 1) * h));
            const double qb = std::sqrt(ts - i2 * h);
            acc += gl3([&](double q) { return qkernel(q, x, c) * trace(ts - q * q); }, qa, qb);
          }
          vals[i] = std::exp(0.5 * c * x) * (iv - 2.0 / std::sqrt(pi) * acc);
        }
      }
      traj.snapshots.push_back({ts, std::move(vals)});
    }
    return traj;
  }

  Trajectory failed;
  failed.grid = u0.grid;
  failed.ok = false;
  failed.message = "volterra: fixed point not contracting after step refinement";
  return failed;
}

}  // namespace halfline
