#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "optdisc/descriptor.hpp"
#include "optdisc/fock.hpp"

namespace optdisc {

struct OptimizerConfig {
  double p = 0.5;                // tradeoff weight in C = p<N> + (1-p)|<U>|^2
  double alpha = 0.25;           // initial step size
  int cutoff = 8;                // total-photon truncation
  long max_iters = 200000;
  double grad_tol = 1e-12;       // relative cost decrease counted as progress
  double backtrack_factor = 0.5;
  unsigned seed = 1;
  int patience = 50;             // consecutive no-progress iterations to stop

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) {
      throw domain_error("tradeoff weight p must lie in (0, 1)");
    }
    if (!(alpha > 0.0)) {
      throw domain_error("step size alpha must be positive");
    }
    if (cutoff < 1) {
      throw domain_error("cutoff must be at least 1");
    }
    if (max_iters < 1) {
      throw domain_error("max_iters must be at least 1");
    }
    if (!(grad_tol > 0.0)) {
      throw domain_error("grad_tol must be positive");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
      throw domain_error("backtrack_factor must lie in (0, 1)");
    }
    if (patience < 1) {
      throw domain_error("patience must be at least 1");
    }
  }
};

struct OptimizerTrace {
  long iterations;
  std::vector<double> cost_history;
  TruncatedState final_state;
  TradeoffPoint final_point;
  bool converged;
  bool cutoff_saturated;
};

/// C(psi) = p <N> + (1-p) |<U>|^2.
inline double cost(const TruncatedState& state, const DeviceSpec& device,
                   double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw domain_error("tradeoff weight p must lie in (0, 1)");
  }
  return p * mean_photons(state) + (1.0 - p) * std::norm(expect_unitary(state, device));
}

/// Derivative of C with respect to <psi|, exploiting diagonality of U:
/// component k is [p n_k + (1-p)(<U> e^{-i d.k} + conj(<U>) e^{i d.k})] a_k.
inline TruncatedState::amplitude_map cost_gradient(const TruncatedState& state,
                                                   const DeviceSpec& device,
                                                   double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw domain_error("tradeoff weight p must lie in (0, 1)");
  }
  const complexd u = expect_unitary(state, device);
  TruncatedState::amplitude_map gradient;
  for (const auto& [index, amp] : state.amplitudes()) {
    const complexd phase = std::polar(1.0, device.phase_dot(index));
    const double multiplier =
        p * index.total() + 2.0 * (1.0 - p) * std::real(u * std::conj(phase));
    gradient.emplace(index, multiplier * amp);
  }
  return gradient;
}

namespace detail {

// Flat view of a sparse state for the inner descent loop.
struct Workspace {
  std::vector<FockIndex> indices;
  std::vector<complexd> amps;
  std::vector<double> photons;
  std::vector<complexd> phase_factors;
  int cutoff = 0;
  int mode_count = 0;

  static Workspace compile(const TruncatedState& state,
                           const DeviceSpec& device) {
    if (state.mode_count() != device.mode_count()) {
      throw dimension_error("state/device mode counts differ");
    }
    Workspace ws;
    ws.cutoff = state.cutoff();
    ws.mode_count = state.mode_count();
    for (const auto& [index, amp] : state.amplitudes()) {
      ws.indices.push_back(index);
      ws.amps.push_back(amp);
      ws.photons.push_back(index.total());
      ws.phase_factors.push_back(std::polar(1.0, device.phase_dot(index)));
    }
    return ws;
  }

  complexd expectation(const std::vector<complexd>& a) const {
    complexd acc(0.0, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      acc += std::norm(a[k]) * phase_factors[k];
    }
    return acc;
  }

  double photon_mean(const std::vector<complexd>& a) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      acc += std::norm(a[k]) * photons[k];
    }
    return acc;
  }

  double cost_of(const std::vector<complexd>& a, double p) const {
    return p * photon_mean(a) + (1.0 - p) * std::norm(expectation(a));
  }

  TruncatedState to_state() const {
    TruncatedState::amplitude_map amplitudes;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      amplitudes.emplace(indices[k], amps[k]);
    }
    return TruncatedState(cutoff, std::move(amplitudes));
  }
};

// One backtracking descent step on the workspace. Returns the accepted alpha,
// or a stagnation flag once alpha underflows without a non-increasing cost.
struct RawStep {
  double cost_after;
  double alpha;
  bool stagnated;
};

inline RawStep raw_descend_step(Workspace& ws, double p, double alpha,
                                double backtrack_factor, double cost_before) {
  const complexd u = ws.expectation(ws.amps);
  const std::size_t size = ws.amps.size();
  std::vector<double> multipliers(size);
  for (std::size_t k = 0; k < size; ++k) {
    multipliers[k] =
        p * ws.photons[k] +
        2.0 * (1.0 - p) * std::real(u * std::conj(ws.phase_factors[k]));
  }
  std::vector<complexd> candidate(size);
  while (alpha >= 1e-15) {
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      candidate[k] = ((1.0 - alpha) - alpha * multipliers[k]) * ws.amps[k];
      norm_sq += std::norm(candidate[k]);
    }
    if (norm_sq > 0.0) {
      const double inv_norm = 1.0 / std::sqrt(norm_sq);
      for (auto& c : candidate) {
        c *= inv_norm;
      }
      const double cost_after = ws.cost_of(candidate, p);
      if (cost_after <= cost_before) {
        ws.amps.swap(candidate);
        return RawStep{cost_after, alpha, false};
      }
    }
    alpha *= backtrack_factor;
  }
  return RawStep{cost_before, alpha, true};
}

}  // namespace detail

struct StepResult {
  TruncatedState state;
  double alpha;
  bool stagnated;
};

/// Candidate (1-alpha)|psi> - alpha dC/d<psi|, renormalized; alpha shrinks by
/// backtrack_factor until the cost stops increasing. Underflow of alpha below
/// 1e-15 signals stagnation and returns the input state unchanged.
inline StepResult descend_step(const TruncatedState& state,
                               const DeviceSpec& device,
                               const OptimizerConfig& config,
                               double current_alpha) {
  config.validate();
  if (!(current_alpha > 0.0)) {
    throw domain_error("step size must be positive");
  }
  detail::Workspace ws = detail::Workspace::compile(state, device);
  const double before = ws.cost_of(ws.amps, config.p);
  detail::RawStep step = detail::raw_descend_step(
      ws, config.p, current_alpha, config.backtrack_factor, before);
  if (step.stagnated) {
    return StepResult{state, step.alpha, true};
  }
  return StepResult{ws.to_state(), step.alpha, false};
}

/// Randomized start: uniform non-negative real weight on the vacuum and on
/// every single-mode index n e_j up to the cutoff, perturbed by seeded noise.
/// Real non-negative amplitudes lose no generality for diagonal devices.
inline TruncatedState initial_state(const DeviceSpec& device,
                                    const OptimizerConfig& config) {
  config.validate();
  std::mt19937 rng(config.seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng()) / 4294967296.0;  // [0, 1), portable
  };
  TruncatedState::amplitude_map amps;
  const int modes = device.mode_count();
  auto noisy = [&uniform]() { return 1.0 + 0.1 * (2.0 * uniform() - 1.0); };
  amps.emplace(FockIndex(std::vector<int>(modes, 0)), complexd(noisy(), 0.0));
  for (int j = 0; j < modes; ++j) {
    for (int n = 1; n <= config.cutoff; ++n) {
      std::vector<int> occ(modes, 0);
      occ[j] = n;
      amps.emplace(FockIndex(std::move(occ)), complexd(noisy(), 0.0));
    }
  }
  return TruncatedState::normalized(config.cutoff, std::move(amps));
}

namespace detail {

inline OptimizerTrace run_descent(const DeviceSpec& device,
                                  const OptimizerConfig& config,
                                  const TruncatedState& start) {
  Workspace ws = Workspace::compile(start, device);
  std::vector<double> cost_history;
  cost_history.reserve(1024);
  double current = ws.cost_of(ws.amps, config.p);
  cost_history.push_back(current);

  double alpha = config.alpha;
  long iterations = 0;
  int quiet_streak = 0;
  bool converged = false;
  while (iterations < config.max_iters) {
    RawStep step =
        raw_descend_step(ws, config.p, alpha, config.backtrack_factor, current);
    if (step.stagnated) {
      converged = true;
      break;
    }
    ++iterations;
    cost_history.push_back(step.cost_after);
    const double decrease =
        (current - step.cost_after) / std::max(std::abs(current), 1e-300);
    current = step.cost_after;
    alpha = std::min(config.alpha, step.alpha / config.backtrack_factor);
    if (decrease < config.grad_tol) {
      ++quiet_streak;
      if (quiet_streak >= config.patience) {
        converged = true;
        break;
      }
    } else {
      quiet_streak = 0;
    }
  }

  TruncatedState final_state = ws.to_state();
  double boundary_weight = 0.0;
  for (std::size_t k = 0; k < ws.amps.size(); ++k) {
    if (ws.photons[k] >= ws.cutoff - 1) {
      boundary_weight += std::norm(ws.amps[k]);
    }
  }
  const complexd u = ws.expectation(ws.amps);
  TradeoffPoint point(error_probability(std::abs(u)),
                      ws.photon_mean(ws.amps), Strategy::iterative,
                      fock_descriptor(final_state));
  return OptimizerTrace{iterations,
                        std::move(cost_history),
                        std::move(final_state),
                        std::move(point),
                        converged,
                        boundary_weight > 1e-6};
}

}  // namespace detail

/// Steepest descent from a warm start.
inline OptimizerTrace optimize_from(const DeviceSpec& device,
                                    const OptimizerConfig& config,
                                    const TruncatedState& start) {
  config.validate();
  return detail::run_descent(device, config, start);
}

/// Steepest descent from the seeded randomized start.
inline OptimizerTrace optimize(const DeviceSpec& device,
                               const OptimizerConfig& config) {
  config.validate();
  return detail::run_descent(device, config, initial_state(device, config));
}

struct FrontierPoint {
  double p;
  TradeoffPoint point;
  bool converged;
  bool cutoff_saturated;
  long iterations;
  int cutoff;
};

namespace detail {

/// Lower convex hull in the (P_e, <N>) plane; input sorted by p_error.
/// Points strictly above a chord between neighbours are dominated and drop.
inline std::vector<FrontierPoint> lower_hull(std::vector<FrontierPoint> pts) {
  if (pts.size() < 3) {
    return pts;
  }
  std::vector<FrontierPoint> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2].point;
      const auto& a = hull[hull.size() - 1].point;
      const auto& b = pt.point;
      const double cross =
          (a.p_error - o.p_error) * (b.mean_photons - o.mean_photons) -
          (a.mean_photons - o.mean_photons) * (b.p_error - o.p_error);
      if (cross < 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(std::move(pt));
  }
  return hull;
}

}  // namespace detail

struct FrontierResult {
  std::vector<FrontierPoint> points;  // hulled, sorted by p_error
  std::vector<FrontierPoint> raw;     // one per grid p, unsorted diagnostics
};

/// Sweeps the tradeoff weight, warm-starting every run from the previous
/// solution, and keeps the lower convex hull of the visited (P_e, <N>)
/// points. Hull points are certificates: each carries its achieving state.
inline FrontierResult trace_frontier(const DeviceSpec& device,
                                     const std::vector<double>& p_grid,
                                     const OptimizerConfig& base) {
  std::vector<double> grid = p_grid;
  std::sort(grid.begin(), grid.end());
  FrontierResult result;
  std::optional<TruncatedState> warm;
  for (double p : grid) {
    OptimizerConfig config = base;
    config.p = p;
    config.validate();
    OptimizerTrace trace = warm.has_value()
                               ? optimize_from(device, config, *warm)
                               : optimize(device, config);
    warm = trace.final_state;
    result.raw.push_back(FrontierPoint{p, trace.final_point, trace.converged,
                                       trace.cutoff_saturated,
                                       trace.iterations, config.cutoff});
  }
  std::vector<FrontierPoint> sorted = result.raw;
  std::sort(sorted.begin(), sorted.end(),
            [](const FrontierPoint& a, const FrontierPoint& b) {
              if (a.point.p_error != b.point.p_error) {
                return a.point.p_error < b.point.p_error;
              }
              return a.point.mean_photons < b.point.mean_photons;
            });
  // Collapse duplicate error levels before hulling; keep the cheaper state.
  std::vector<FrontierPoint> dedup;
  for (auto& pt : sorted) {
    if (!dedup.empty() &&
        std::abs(dedup.back().point.p_error - pt.point.p_error) < 1e-14) {
      continue;
    }
    dedup.push_back(std::move(pt));
  }
  result.points = detail::lower_hull(std::move(dedup));
  return result;
}

}  // namespace optdisc
