#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optdisc/fock.hpp"
#include "optdisc/format.hpp"

namespace optdisc {

/// Canonical beamsplitter parameter: |delta| after wrapping into (-pi, pi].
/// Discrimination statistics are invariant under delta -> -delta, so the
/// magnitude carries all the information. Returns a value in [0, pi].
inline double canonical_beamsplitter_delta(double delta) {
  return std::abs(wrap_phase(delta));
}

/// Two-term superposition a1|phi_n1> + a2|phi_n2> with
/// phi_n = (|n,0> + |0,n>)/sqrt(2) and phi_0 = |00>.
struct NoonPairState {
  int n1;
  int n2;
  double a1;
  double a2;
  double delta;

  NoonPairState(int n1_in, int n2_in, double a1_in, double a2_in,
                double delta_in)
      : n1(n1_in), n2(n2_in), a1(a1_in), a2(a2_in), delta(delta_in) {
    if (n1 < 0 || n2 < 0 || n1 == n2) {
      throw domain_error("NOON pair needs two distinct non-negative levels");
    }
    if (a1 < 0.0 || a2 < 0.0 ||
        std::abs(a1 * a1 + a2 * a2 - 1.0) > kNormTol) {
      throw domain_error("NOON pair amplitudes must be non-negative and "
                         "normalized");
    }
    if (!(delta > 0.0 && delta <= kPi)) {
      throw domain_error("NOON pair delta must lie in (0, pi]");
    }
  }

  double mean_photons() const { return a1 * a1 * n1 + a2 * a2 * n2; }

  /// Expectation of the beamsplitter diag(e^{i delta}, e^{-i delta}):
  /// a1^2 cos(delta n1) + a2^2 cos(delta n2).
  double overlap() const {
    return a1 * a1 * std::cos(delta * n1) + a2 * a2 * std::cos(delta * n2);
  }

  TruncatedState to_truncated(int cutoff = -1) const {
    if (cutoff < 0) {
      cutoff = std::max(n1, n2);
    }
    TruncatedState::amplitude_map amps;
    auto add_branch = [&amps](int n, double a) {
      if (a == 0.0) {
        return;
      }
      if (n == 0) {
        amps[FockIndex{0, 0}] += complexd(a, 0.0);
      } else {
        const double half = a / std::sqrt(2.0);
        amps[FockIndex{n, 0}] += complexd(half, 0.0);
        amps[FockIndex{0, n}] += complexd(half, 0.0);
      }
    };
    add_branch(n1, a1);
    add_branch(n2, a2);
    return TruncatedState(cutoff, std::move(amps));
  }
};

namespace detail {

/// Smallest positive root of x = tan(x/2); it lies in (pi/2, pi).
/// Bisection on g(x) = x - tan(x/2), which changes sign exactly once there.
inline double tan_half_root() {
  static const double root = [] {
    double lo = kPi / 2.0 + 1e-9;
    double hi = kPi - 1e-9;
    auto g = [](double x) { return x - std::tan(x / 2.0); };
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (g(lo) * g(mid) <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }();
  return root;
}

}  // namespace detail

/// Continuous minimizer of (1-K) n / (1 - cos(delta n)): n~ = x*/delta with
/// x* the smallest positive solution of x = tan(x/2).
inline double solve_n_tilde(double delta) {
  const double d = canonical_beamsplitter_delta(delta);
  if (d <= 0.0) {
    throw domain_error("delta must be non-zero (devices would be identical)");
  }
  return detail::tan_half_root() / d;
}

/// Mean photon number of the vacuum/NOON-n pair pinned at overlap K:
/// (1 - K) n / (1 - cos(delta n)).
inline double energy_single_noon(int n, double delta, double K) {
  if (n <= 0) {
    throw domain_error("NOON level must be positive");
  }
  if (!(K >= 0.0 && K <= 1.0)) {
    throw domain_error("overlap level K outside [0, 1]");
  }
  const double denom = 1.0 - std::cos(delta * n);
  if (denom <= kNormTol) {
    throw infeasible_state_error(
        "delta*n is a multiple of 2*pi; the NOON branch acquires no phase");
  }
  return (1.0 - K) * n / denom;
}

struct BeamsplitterOptimum {
  int n_star;
  double n_tilde;
  NoonPairState state;
  TradeoffPoint point;
};

inline std::string noon_descriptor(int n, double branch_weight) {
  return "noon(n=" + std::to_string(n) + ";a2=" + format_g17(branch_weight) +
         ")";
}

/// Exact minimum-energy input for discriminating the identity from the
/// beamsplitter diag(e^{i delta}, e^{-i delta}) at error threshold q.
///
/// The optimum is a vacuum/NOON pair. Candidate levels are floor/ceil of the
/// continuous root (never below 1), filtered by the feasibility condition
/// cos(delta n) < K; if rounding lands both candidates on the infeasible
/// side, the scan continues upward until a feasible level appears. Energy
/// ties break toward the smaller level.
inline BeamsplitterOptimum optimal_beamsplitter_state(double delta, double q) {
  const double d = canonical_beamsplitter_delta(delta);
  if (d <= 0.0) {
    throw devices_identical_error(
        "delta = 0: the devices are identical, discrimination is impossible");
  }
  if (!(q > 0.0 && q <= 0.5)) {
    throw domain_error("error threshold " + std::to_string(q) +
                       " outside (0, 1/2]");
  }
  const double K = overlap_for_error(q);
  const double n_tilde = solve_n_tilde(d);

  std::vector<int> candidates;
  const int lo = std::max(1, static_cast<int>(std::floor(n_tilde)));
  const int hi = static_cast<int>(std::ceil(n_tilde));
  candidates.push_back(lo);
  if (hi != lo) {
    candidates.push_back(hi);
  }

  auto feasible = [&](int n) { return std::cos(d * n) < K; };

  std::vector<int> usable;
  for (int n : candidates) {
    if (feasible(n)) {
      usable.push_back(n);
    }
  }
  if (usable.empty()) {
    // Integer rounding pushed both candidates outside Prop-style feasibility;
    // scan upward for the first level below the constraint line.
    const int scan_limit = hi + 8 * (static_cast<int>(std::ceil(kPi / d)) + 8);
    for (int n = hi + 1; n <= scan_limit; ++n) {
      if (feasible(n)) {
        usable.push_back(n);
        break;
      }
    }
  }
  if (usable.empty()) {
    throw std::logic_error("no feasible NOON level found; internal invariant "
                           "violation");
  }

  int n_star = usable.front();
  double best_energy = energy_single_noon(n_star, d, K);
  for (std::size_t i = 1; i < usable.size(); ++i) {
    const double e = energy_single_noon(usable[i], d, K);
    // Tolerance-aware tie-break toward the smaller level.
    if (e < best_energy * (1.0 - 1e-12)) {
      n_star = usable[i];
      best_energy = e;
    }
  }

  const double branch_weight = (1.0 - K) / (1.0 - std::cos(d * n_star));
  const double a1 = std::sqrt(branch_weight);
  const double a2 = std::sqrt(std::max(0.0, 1.0 - branch_weight));
  NoonPairState state(n_star, 0, a1, a2, d);
  TradeoffPoint point(q, state.mean_photons(), Strategy::analytic_beamsplitter,
                      noon_descriptor(n_star, branch_weight));
  return BeamsplitterOptimum{n_star, n_tilde, std::move(state),
                             std::move(point)};
}

/// One tradeoff point per requested error threshold.
inline std::vector<TradeoffPoint> beamsplitter_tradeoff_curve(
    double delta, const std::vector<double>& q_values) {
  std::vector<TradeoffPoint> points;
  points.reserve(q_values.size());
  for (double q : q_values) {
    points.push_back(optimal_beamsplitter_state(delta, q).point);
  }
  return points;
}

}  // namespace optdisc
