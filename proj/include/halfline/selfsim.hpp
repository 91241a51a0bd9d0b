#ifndef HALFLINE_SELFSIM_HPP
#define HALFLINE_SELFSIM_HPP

#include "halfline/stepper.hpp"

namespace halfline {

/// Diffusive drift experiment (c = 0, g > 0): the boundary value obeys the
/// sharp comparison envelope
///   -2 gamma2 sqrt(t/pi) - |u0|_inf <= u(0,t) <= -2 gamma1 sqrt(t/pi) + |u0|_inf
/// built from the explicit constant-flux solutions.
struct DriftReport {
  double gamma1 = 0.0, gamma2 = 0.0;
  std::vector<TracePoint> trace;
  double fitted_coefficient = 0.0;  // a in u(0,t) ~ -a sqrt(t)
  bool envelope_ok = false;
  double envelope_margin = 0.0;  // worst signed distance to the envelope (>= 0 good)
  Trajectory trajectory;
};

DriftReport drift_experiment(const FluxModel& f, const Field& u0, double t_end,
                             const EvolveConfig& cfg);

/// Explicit solution of the constant-flux comparison problem (c = 0):
///   u(x,t) = u_init - 2 gamma [ sqrt(t/pi) e^{-x^2/(4t)} - (x/2) erfc(x/(2 sqrt t)) ].
double constant_flux_solution(double x, double t, double gamma, double u_init);

/// Stationary profile of the similarity equation
///   V'' - (xi/2) V' - V/2 = 0,  V'(0) = -V(0)^2,  V -> 0,
/// by shooting in V(0) with bisection on the blow-up sign.
struct SimilarityProfile {
  Vec xi;      // uniform nodes on [0, xi_max]
  Vec V, Vp;   // profile and its first derivative
  double V0 = 0.0;
  double boundary_residual = 0.0;  // |V'(0) + V(0)^2| from the discrete profile
};

SimilarityProfile similarity_stationary_profile(double xi_max, int n);

/// Stationary state of the discretized similarity system on a given grid
/// (Newton on the discrete operator, seeded by the shooting profile).
Vec similarity_stationary_discrete(std::shared_ptr<const Grid1D> grid);

struct SimilarityState {
  std::shared_ptr<const Grid1D> xi_grid;
  Vec V;
  double tau = 0.0;
  double eta = 0.0;  // e^{tau/2}
};

/// Similarity-variable evolution d_tau V = V'' - (xi/2)V' - V/2 with boundary
/// condition V'(0) = -V^2 + kappa eta V^3 (correction on) and
/// eta(tau) = eta0 e^{tau/2} integrated exactly.
struct SimilarityEvolveResult {
  SimilarityState state;
  Trajectory trajectory;
};

SimilarityEvolveResult similarity_evolve(const SimilarityState& s0, bool flux_correction,
                                         double kappa, double tau_end, const EvolveConfig& cfg);

/// The similarity problem spec (exposed for two-route checks).
ProblemSpec similarity_problem(bool flux_correction, double kappa, double eta0, FarBC far);

/// Spectrum of the similarity linearization L0 (boundary coefficient
/// -2 V*(0)) on a grid-refinement ladder, computed on the Gaussian-conjugated
/// symmetric form H = -d^2/dxi^2 + xi^2/16 + 1/4 and Richardson-extrapolated.
/// Eigenvalues reported for -L0, descending (unstable first).
struct SpectrumReport {
  enum class Operator { L0_similarity, A0_constant };
  Operator op = Operator::L0_similarity;
  std::vector<int> grid_ladder;
  std::vector<std::vector<double>> eigenvalues;  // per level, descending
  std::vector<double> extrapolated;
  std::string weight = "gaussian exp(-xi^2/4) inner product (conjugation exp(-xi^2/8))";
  bool ladder_cauchy = false;
};

SpectrumReport similarity_spectrum(const std::vector<int>& n_ladder, double xi_max,
                                   int n_eigs = 4, double boundary_coeff_override =
                                       std::numeric_limits<double>::quiet_NaN());

/// Unstable eigenfunction of -L0 on [0, xi_max] (n nodes, uniform), both the
/// exact closed form (V* + xi V*')/2 and a discrete eigenvector route agree.
Vec similarity_unstable_eigenfunction(const Grid1D& grid);

/// Departure-rate fit at a linear zero (c = 0, g'(0) = -gamma < 0): the
/// boundary trace of a solution leaving the state grows like e^{gamma^2 t}
/// and the departing profile has shape e^{-gamma x}.
struct RateFit {
  double fitted_rate = 0.0;
  double predicted_rate = 0.0;  // gamma^2
  double fitted_shape_slope = 0.0;
  double predicted_shape_slope = 0.0;  // -gamma
  bool ok = false;
};

RateFit rate_fit_linear_zero(const FluxModel& f, double gamma, double L, std::size_t n);

}  // namespace halfline

#endif
