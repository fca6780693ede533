#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optdisc/beamsplitter.hpp"
#include "optdisc/fock.hpp"

// Brute-force and quadrature verifiers. Everything here is deliberately
// independent of the production code paths it checks; keep it that way.

namespace optdisc {

struct PairSearchResult {
  int best_n1;
  int best_n2;
  double best_mean_photons;
  long scanned_pairs;
};

/// Scans every two-term NOON pair 0 <= n1 < n2 <= n_max able to pin the
/// overlap at K and returns the one with the smallest mean photon number,
/// evaluated from the closed form
///   <N> = (n2 cos(d n1) - n1 cos(d n2) + K (n1 - n2)) / (cos(d n1) - cos(d n2)).
/// Ties within 1e-12 resolve to the lexicographically smaller pair.
inline PairSearchResult exhaustive_pair_search(double delta, double K,
                                               int n_max) {
  const double d = canonical_beamsplitter_delta(delta);
  if (d <= 0.0) {
    throw domain_error("delta must be non-zero");
  }
  if (!(K >= 0.0 && K <= 1.0)) {
    throw domain_error("overlap level K outside [0, 1]");
  }
  if (n_max < static_cast<int>(std::ceil(kPi / d))) {
    throw domain_error("n_max too small to cover the feasible region");
  }
  std::vector<double> cosines(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    cosines[n] = std::cos(d * n);
  }
  bool found = false;
  PairSearchResult result{0, 0, 0.0, 0};
  for (int n1 = 0; n1 < n_max; ++n1) {
    for (int n2 = n1 + 1; n2 <= n_max; ++n2) {
      ++result.scanned_pairs;
      const double c1 = cosines[n1];
      const double c2 = cosines[n2];
      if (std::abs(c1 - c2) <= 1e-15) {
        continue;
      }
      if (K < std::min(c1, c2) || K > std::max(c1, c2)) {
        continue;
      }
      const double mean =
          (n2 * c1 - n1 * c2 + K * (n1 - n2)) / (c1 - c2);
      if (!found || mean < result.best_mean_photons - 1e-12) {
        result.best_n1 = n1;
        result.best_n2 = n2;
        result.best_mean_photons = mean;
        found = true;
      }
    }
  }
  if (!found) {
    throw domain_error("no feasible NOON pair below n_max");
  }
  return result;
}

namespace oracle_detail {

inline void enumerate_indices(int modes, int cutoff, std::vector<int>& prefix,
                              std::vector<FockIndex>& out) {
  if (static_cast<int>(prefix.size()) == modes) {
    out.emplace_back(prefix);
    return;
  }
  int used = 0;
  for (int n : prefix) {
    used += n;
  }
  for (int n = 0; n + used <= cutoff; ++n) {
    prefix.push_back(n);
    enumerate_indices(modes, cutoff, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<FockIndex> basis_indices(int modes, int cutoff) {
  std::vector<FockIndex> out;
  std::vector<int> prefix;
  enumerate_indices(modes, cutoff, prefix, out);
  return out;
}

struct GridScan {
  const std::vector<double>& photons;
  const std::vector<complexd>& phases;  // exp(i d.k)
  int resolution;
  double target;
  double window;
  double best = 1e300;
  bool found = false;

  void recurse(std::size_t pos, int units_left, complexd partial,
               double energy_units) {
    const double energy = energy_units / resolution;
    if (energy >= best) {
      return;
    }
    const double rest = static_cast<double>(units_left) / resolution;
    const double mag = std::abs(partial);
    if (mag - rest > target + window || mag + rest < target - window) {
      return;
    }
    if (pos + 1 == photons.size()) {
      // Last slot (the vacuum) absorbs the remaining weight.
      const complexd total =
          partial + (static_cast<double>(units_left) / resolution) * phases[pos];
      if (std::abs(std::abs(total) - target) <= window) {
        best = energy;
        found = true;
      }
      return;
    }
    for (int t = 0; t <= units_left; ++t) {
      const double w = static_cast<double>(t) / resolution;
      recurse(pos + 1, units_left - t, partial + w * phases[pos],
              energy_units + t * photons[pos]);
    }
  }
};

}  // namespace oracle_detail

/// Brute-force minimum of <N> over a simplex grid of basis-state weights with
/// the overlap modulus pinned near K. Weights are probabilities: phases of
/// the amplitudes are irrelevant for diagonal devices. The result is an upper
/// bound whose gap shrinks as the resolution grows; the feasibility window is
/// 2/resolution.
inline double dense_grid_search(const DeviceSpec& device, int cutoff, double K,
                                int grid_resolution) {
  if (cutoff < 0 || cutoff > 5) {
    throw domain_error("dense_grid_search is for tiny cutoffs only");
  }
  if (!(K >= 0.0 && K <= 1.0)) {
    throw domain_error("overlap level K outside [0, 1]");
  }
  if (grid_resolution < 1) {
    throw domain_error("grid resolution must be positive");
  }
  std::vector<FockIndex> indices =
      oracle_detail::basis_indices(device.mode_count(), cutoff);
  if (indices.size() > 32) {
    throw domain_error("basis too large for the dense grid oracle");
  }
  // Heavy indices first so the energy prune bites early; vacuum last.
  std::sort(indices.begin(), indices.end(),
            [](const FockIndex& a, const FockIndex& b) {
              if (a.total() != b.total()) {
                return a.total() > b.total();
              }
              return a < b;
            });
  std::vector<double> photons;
  std::vector<complexd> phases;
  for (const FockIndex& index : indices) {
    photons.push_back(index.total());
    phases.push_back(std::polar(1.0, device.phase_dot(index)));
  }
  const double window = 2.0 / grid_resolution;
  oracle_detail::GridScan scan{photons, phases, grid_resolution, K, window};

  // Seed the prune bound with vacuum-pair states before the full scan.
  for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
    for (int t = 0; t <= grid_resolution; ++t) {
      const double w = static_cast<double>(t) / grid_resolution;
      const complexd u = w * phases[i] + (1.0 - w) * phases.back();
      if (std::abs(std::abs(u) - K) <= window) {
        scan.best = std::min(scan.best, w * photons[i]);
        scan.found = true;
      }
    }
  }

  scan.recurse(0, grid_resolution, complexd(0.0, 0.0), 0.0);
  if (!scan.found) {
    throw domain_error("no grid state reaches the requested overlap at this "
                       "cutoff");
  }
  return scan.best;
}

namespace oracle_detail {

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double fa, double fm,
                               double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (b <= a) {
    return 0.0;
  }
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

inline double gauss_density(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

}  // namespace oracle_detail

/// Standard normal CDF by adaptive quadrature of the density. Used to verify
/// the production Phi, so it must not share code with it.
inline double normal_cdf_quadrature(double x) {
  if (x == 0.0) {
    return 0.5;
  }
  const double a = std::min(0.0, x);
  const double b = std::max(0.0, x);
  const double body =
      oracle_detail::integrate(oracle_detail::gauss_density, a, b, 1e-15);
  return x > 0.0 ? 0.5 + body : 0.5 - body;
}

/// Error probability of the optimal coherent-homodyne strategy computed from
/// the defining half-space integral: the multivariate problem projects
/// exactly onto the line through the two outcome means, leaving two unit
/// Gaussians integrated over a half-line split at their midpoint.
inline double gaussian_halfspace_error(double eta, double delta_star) {
  if (!(eta >= 0.0)) {
    throw domain_error("photon budget eta must be non-negative");
  }
  const complexd alpha = std::polar(std::sqrt(eta), (kPi - delta_star) / 2.0);
  const double v0[2] = {2.0 * std::real(alpha), 0.0};
  const double v1[2] = {2.0 * std::real(std::polar(1.0, delta_star) * alpha),
                        0.0};
  const double diff[2] = {v1[0] - v0[0], v1[1] - v0[1]};
  const double dist = std::hypot(diff[0], diff[1]);
  if (dist < 1e-12) {
    return 0.5;  // identical Gaussians
  }
  const double unit[2] = {diff[0] / dist, diff[1] / dist};
  const double mu0 = v0[0] * unit[0] + v0[1] * unit[1];
  const double mu1 = v1[0] * unit[0] + v1[1] * unit[1];
  const double norm0 = v0[0] * v0[0] + v0[1] * v0[1];
  const double norm1 = v1[0] * v1[0] + v1[1] * v1[1];
  const double threshold = (norm1 - norm0) / (2.0 * dist);

  auto tail = [](double from, double mean) {
    const double to = std::max(from, mean + 14.0);
    return oracle_detail::integrate(
        [mean](double s) { return oracle_detail::gauss_density(s - mean); },
        from, to, 1e-11);
  };
  return 0.5 + 0.5 * (tail(threshold, mu0) - tail(threshold, mu1));
}

/// The figure of merit evaluated on raw (not necessarily normalized)
/// amplitudes, exactly as differentiated before the renormalization step.
inline double unnormalized_cost(const TruncatedState::amplitude_map& amps,
                                const DeviceSpec& device, double p) {
  double photons = 0.0;
  complexd u(0.0, 0.0);
  for (const auto& [index, amp] : amps) {
    const double w = std::norm(amp);
    photons += w * index.total();
    u += w * std::polar(1.0, device.phase_dot(index));
  }
  return p * photons + (1.0 - p) * std::norm(u);
}

struct FiniteDifferenceResult {
  TruncatedState::amplitude_map gradient;  // Wirtinger d/d conj(a_k)
  double max_richardson_gap;
};

/// Central differences of the unnormalized cost along every real and
/// imaginary amplitude coordinate, assembled into the same Wirtinger
/// convention the analytic gradient uses. Each coordinate is evaluated at
/// step and step/2 and Richardson-extrapolated; a large disagreement between
/// the two estimates flags cancellation from a too-small step.
inline FiniteDifferenceResult finite_difference_gradient(
    const TruncatedState& state, const DeviceSpec& device, double p,
    double step) {
  if (!(step > 0.0)) {
    throw domain_error("finite-difference step must be positive");
  }
  TruncatedState::amplitude_map work = state.amplitudes();
  FiniteDifferenceResult result;
  result.max_richardson_gap = 0.0;

  auto central = [&](const FockIndex& index, bool imaginary, double h) {
    complexd& slot = work.at(index);
    const complexd saved = slot;
    const complexd offset = imaginary ? complexd(0.0, h) : complexd(h, 0.0);
    slot = saved + offset;
    const double up = unnormalized_cost(work, device, p);
    slot = saved - offset;
    const double down = unnormalized_cost(work, device, p);
    slot = saved;
    return (up - down) / (2.0 * h);
  };

  for (const auto& [index, amp] : state.amplitudes()) {
    double parts[2];
    for (int imaginary = 0; imaginary < 2; ++imaginary) {
      const double coarse = central(index, imaginary != 0, step);
      const double fine = central(index, imaginary != 0, step / 2.0);
      result.max_richardson_gap =
          std::max(result.max_richardson_gap,
                   std::abs(fine - coarse) /
                       std::max(1.0, std::abs(fine)));
      parts[imaginary] = (4.0 * fine - coarse) / 3.0;
    }
    // dC/dx = 2 Re dC/d conj(a), dC/dy = 2 Im dC/d conj(a).
    result.gradient.emplace(index,
                            complexd(parts[0] / 2.0, parts[1] / 2.0));
  }
  if (result.max_richardson_gap > 1e-2) {
    throw std::runtime_error(
        "finite-difference step too small: Richardson estimates disagree by " +
        std::to_string(result.max_richardson_gap));
  }
  return result;
}

}  // namespace optdisc
