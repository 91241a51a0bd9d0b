#include "halfline/floquet.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace halfline {

namespace {

Vec trapezoid_weights(const Grid1D& g, double c) {
  const std::size_t n = g.n();
  Vec w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = g.nodes[i + 1] - g.nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  for (std::size_t i = 0; i < n; ++i) w[i] *= std::exp(-c * g.nodes[i]);
  return w;
}

double wdot(const Vec& a, const Vec& b, const Vec& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

}  // namespace

Monodromy::Monodromy(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec, double dt,
                     int nsteps, const Vec& trace_u0)
    : nsteps_(nsteps), dt_(dt) {
  if (static_cast<int>(trace_u0.size()) != nsteps + 1)
    throw std::invalid_argument("Monodromy: trace length must be nsteps + 1");
  Vec gp(trace_u0.size());
  for (std::size_t j = 0; j < gp.size(); ++j) gp[j] = spec.flux_du(trace_u0[j], j * dt);
  UniformCubicInterp interp(0.0, dt, std::move(gp), /*periodic=*/false);
  lin_ = std::make_unique<LinearizedStepper>(std::move(grid), spec, dt,
                                             [interp](double t) { return interp(t); });
}

void Monodromy::apply(Vec& w) const { lin_->propagate(w, 0.0, nsteps_); }

void Monodromy::apply_block(std::vector<Vec>& ws) const {
  lin_->propagate_block(ws, 0.0, nsteps_);
}

double weighted_angle(const Vec& a, const Vec& b, const Grid1D& grid, double c) {
  const Vec w = trapezoid_weights(grid, c);
  const double na = std::sqrt(wdot(a, a, w)), nb = std::sqrt(wdot(b, b, w));
  if (na == 0.0 || nb == 0.0) return 0.0;
  double cosang = std::abs(wdot(a, b, w)) / (na * nb);
  cosang = std::min(1.0, cosang);
  return std::acos(cosang);
}

FloquetResult floquet_multipliers(const Monodromy& M, int m, double c, const Grid1D& grid,
                                  const Vec* v_seed, int max_iters, double ritz_tol) {
  const std::size_t n = grid.n();
  const int b = std::max(m + 2, 4);
  const Vec w = trapezoid_weights(grid, c);

  std::mt19937 rng(42);  // fixed seed: deterministic by construction
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<Vec> V(b, Vec(n, 0.0));
  if (v_seed && v_seed->size() == n) V[0] = *v_seed;
  else
    for (double& x : V[0]) x = dist(rng);
  for (int j = 1; j < b; ++j)
    for (double& x : V[j]) x = dist(rng);

  auto orthonormalize = [&](std::vector<Vec>& Q) {
    for (int j = 0; j < b; ++j) {
      for (int k = 0; k < j; ++k) {
        const double p = wdot(Q[j], Q[k], w);
        for (std::size_t i = 0; i < n; ++i) Q[j][i] -= p * Q[k][i];
      }
      const double nrm = std::sqrt(wdot(Q[j], Q[j], w));
      if (nrm < 1e-300) {
        for (double& x : Q[j]) x = dist(rng);
        const double nn = std::sqrt(wdot(Q[j], Q[j], w));
        for (double& x : Q[j]) x /= nn;
      } else {
        for (double& x : Q[j]) x /= nrm;
      }
    }
  };

  FloquetResult out;
  orthonormalize(V);
  Eigen::VectorXcd prev_ritz = Eigen::VectorXcd::Zero(b);
  std::vector<Vec> W;
  for (int it = 0; it < max_iters; ++it) {
    W = V;
    M.apply_block(W);
    // Ritz values from the projected map
    Eigen::MatrixXd B(b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) B(i, j) = wdot(V[i], W[j], w);
    Eigen::EigenSolver<Eigen::MatrixXd> es(B);
    Eigen::VectorXcd ritz = es.eigenvalues();
    std::sort(ritz.data(), ritz.data() + b,
              [](auto x, auto y) { return std::abs(x) > std::abs(y); });
    out.iterations = it + 1;
    if (it > 2) {
      double delta = 0.0;
      for (int j = 0; j < std::min(m, b); ++j) delta = std::max(delta, std::abs(ritz[j] - prev_ritz[j]));
      if (delta < ritz_tol) {
        out.converged = true;
        // leading Ritz vector
        Eigen::MatrixXcd vecs = es.eigenvectors();
        int lead = 0;
        double best = 0.0;
        for (int j = 0; j < b; ++j)
          if (std::abs(es.eigenvalues()[j]) > best) {
            best = std::abs(es.eigenvalues()[j]);
            lead = j;
          }
        Vec lv(n, 0.0);
        for (int k = 0; k < b; ++k) {
          const double coef = vecs(k, lead).real();
          for (std::size_t i = 0; i < n; ++i) lv[i] += coef * V[k][i];
        }
        for (std::size_t i = 0; i < n; ++i) lv[i] *= std::exp(-0.5 * c * grid.nodes[i]);
        double nrm = 0.0;
        for (double x : lv) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm > 0)
          for (double& x : lv) x /= nrm;
        out.leading_vector_weighted = std::move(lv);
        out.multipliers.assign(ritz.data(), ritz.data() + std::min<int>(m, b));
        return out;
      }
      prev_ritz = ritz;
    } else {
      prev_ritz = ritz;
    }
    V = W;
    orthonormalize(V);
  }
  // not fully settled: report the last Ritz data anyway
  Eigen::MatrixXd B(b, b);
  W = V;
  M.apply_block(W);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) B(i, j) = wdot(V[i], W[j], w);
  Eigen::EigenSolver<Eigen::MatrixXd> es(B);
  Eigen::VectorXcd ritz = es.eigenvalues();
  std::sort(ritz.data(), ritz.data() + b, [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  out.multipliers.assign(ritz.data(), ritz.data() + std::min<int>(m, b));
  out.converged = false;
  return out;
}

}  // namespace halfline
