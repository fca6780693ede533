#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "optdisc/beamsplitter.hpp"
#include "optdisc/fock.hpp"
#include "optdisc/format.hpp"

namespace optdisc {

/// Standard normal CDF, evaluated through the complementary error function.
inline double normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw domain_error("normal_cdf needs a finite argument");
  }
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Inverse normal CDF by bracketed bisection on normal_cdf.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw domain_error("quantile level must lie in (0, 1)");
  }
  double lo = -40.0;
  double hi = 40.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Coherent input on the most phase-sensitive mode, vacuum elsewhere,
/// followed by homodyne detection and a likelihood-ratio guess.
struct CoherentStrategy {
  double eta;          // mean photon budget, all of it on best_mode
  DeviceSpec device;
  int best_mode;       // argmax_i |delta_i|, ties to the lowest index
  complexd alpha_star; // sqrt(eta) exp(i (pi - delta*) / 2)
};

namespace detail {

inline double checked_dominant_phase(const DeviceSpec& device) {
  if (device.all_phases_zero()) {
    throw devices_identical_error(
        "all phases vanish: the devices are identical");
  }
  return device.dominant_phase();
}

}  // namespace detail

/// Error probability of the homodyne strategy at photon budget eta:
/// P_e = (1 + Phi(-a) - Phi(a)) / 2 with a = 2 sqrt(eta) sin(|delta*|/2).
inline double coherent_error(double eta, const DeviceSpec& device) {
  if (!(eta >= 0.0)) {
    throw domain_error("photon budget eta must be non-negative");
  }
  const double delta_star = detail::checked_dominant_phase(device);
  const double a = 2.0 * std::sqrt(eta) * std::sin(std::abs(delta_star) / 2.0);
  return 0.5 * (1.0 + normal_cdf(-a) - normal_cdf(a));
}

inline std::string coherent_descriptor(double eta, int mode) {
  return "coherent(eta=" + format_g17(eta) + ";mode=" + std::to_string(mode) +
         ")";
}

/// Photon budget needed to reach error threshold q, with the strategy that
/// attains it: eta = (Phi^{-1}(1-q) / (2 sin(|delta*|/2)))^2.
inline CoherentStrategy coherent_energy_for_error(double q,
                                                  const DeviceSpec& device) {
  if (!(q > 0.0 && q < 0.5)) {
    throw domain_error("error threshold " + std::to_string(q) +
                       " outside (0, 1/2)");
  }
  const double delta_star = detail::checked_dominant_phase(device);
  const double z = normal_quantile(1.0 - q);
  const double root_eta = z / (2.0 * std::sin(std::abs(delta_star) / 2.0));
  const double eta = root_eta * root_eta;
  const complexd alpha_star =
      std::polar(std::sqrt(eta), (kPi - delta_star) / 2.0);
  return CoherentStrategy{eta, device, device.dominant_mode(), alpha_star};
}

inline std::vector<TradeoffPoint> coherent_tradeoff_curve(
    const DeviceSpec& device, const std::vector<double>& q_values) {
  std::vector<TradeoffPoint> points;
  points.reserve(q_values.size());
  for (double q : q_values) {
    const CoherentStrategy strategy = coherent_energy_for_error(q, device);
    points.emplace_back(q, strategy.eta, Strategy::coherent_homodyne,
                        coherent_descriptor(strategy.eta, strategy.best_mode));
  }
  return points;
}

/// Photon overhead of the homodyne strategy against the exact optimum for a
/// beamsplitter diag(e^{i delta}, e^{-i delta}) at matched error q.
inline double advantage_ratio(const DeviceSpec& device, double q) {
  if (device.mode_count() != 2 ||
      std::abs(wrap_phase(device.phases()[0] + device.phases()[1])) > 1e-12) {
    throw domain_error(
        "advantage_ratio needs a beamsplitter-form device [delta, -delta]");
  }
  const double delta = canonical_beamsplitter_delta(device.phases()[0]);
  if (delta == 0.0) {
    throw devices_identical_error("delta = 0: devices are identical");
  }
  const double eta = coherent_energy_for_error(q, device).eta;
  const double optimal = optimal_beamsplitter_state(delta, q).point.mean_photons;
  return eta / optimal;
}

}  // namespace optdisc
