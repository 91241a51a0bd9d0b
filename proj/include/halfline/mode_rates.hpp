#ifndef HALFLINE_MODE_RATES_HPP
#define HALFLINE_MODE_RATES_HPP

#include <complex>
#include <stdexcept>

namespace halfline {

/// Spatial decay/growth rates of the temporal Fourier modes of time-periodic
/// solutions, principal-branch square roots throughout.
///
/// Weighted equation, y'' - (c^2/4 + i k w) y = 0:
///   nu_pm = +- sqrt(c^2/4 + i k w)
/// Unweighted derivative equation, y'' - c y' - i k w y = 0:
///   eta_pm = (c +- sqrt(c^2 + 4 i k w)) / 2
/// Sign structure: Re nu_plus = -Re nu_minus > 0 for c > 0, and for k != 0
/// Re eta_plus > c, Re eta_minus < 0.
struct ModeRates {
  int k = 0;
  double omega = 0.0;
  std::complex<double> nu_plus, nu_minus;
  std::complex<double> eta_plus, eta_minus;
};

inline ModeRates mode_rates_real(double k, double omega, double c) {
  if (!(omega > 0.0)) throw std::invalid_argument("mode_rates: requires omega > 0");
  ModeRates r;
  r.k = static_cast<int>(k);
  r.omega = omega;
  const std::complex<double> ikw(0.0, k * omega);
  r.nu_plus = std::sqrt(0.25 * c * c + ikw);
  r.nu_minus = -r.nu_plus;
  const std::complex<double> root = std::sqrt(c * c + 4.0 * ikw);
  r.eta_plus = 0.5 * (c + root);
  r.eta_minus = 0.5 * (c - root);
  return r;
}

inline ModeRates mode_rates(int k, double omega, double c) {
  return mode_rates_real(static_cast<double>(k), omega, c);
}

}  // namespace halfline

#endif
