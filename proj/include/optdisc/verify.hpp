#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "optdisc/beamsplitter.hpp"
#include "optdisc/coherent.hpp"
#include "optdisc/fock.hpp"
#include "optdisc/oracle.hpp"
#include "optdisc/optimizer.hpp"

// Oracle agreement suites shared between `optdisc verify` and the tests.

namespace optdisc {

struct CheckResult {
  std::string name;
  double tolerance;
  double observed;  // worst deviation seen
  bool passed;
};

namespace verify_detail {

inline double portable_uniform(std::mt19937& rng) {
  return static_cast<double>(rng()) / 4294967296.0;
}

inline CheckResult make(const std::string& name, double tolerance,
                        double observed) {
  return CheckResult{name, tolerance, observed, observed <= tolerance};
}

inline TruncatedState random_dense_state(std::mt19937& rng, int modes,
                                         int cutoff) {
  TruncatedState::amplitude_map amps;
  for (const FockIndex& index : oracle_detail::basis_indices(modes, cutoff)) {
    amps.emplace(index, complexd(2.0 * portable_uniform(rng) - 1.0,
                                 2.0 * portable_uniform(rng) - 1.0));
  }
  return TruncatedState::normalized(cutoff, std::move(amps));
}

}  // namespace verify_detail

/// Analytic beamsplitter optimum against the exhaustive two-term scan.
inline std::vector<CheckResult> verify_pair_search() {
  const std::vector<std::pair<std::string, double>> deltas = {
      {"pi/12", kPi / 12}, {"pi/8", kPi / 8},     {"pi/4", kPi / 4},
      {"pi/2", kPi / 2},   {"3pi/4", 3 * kPi / 4}, {"pi", kPi}};
  const std::vector<double> qs = {0.05, 0.1, 0.2, 0.3, 0.4};
  std::vector<CheckResult> results;
  for (const auto& [name, delta] : deltas) {
    double worst = 0.0;
    for (double q : qs) {
      const double analytic =
          optimal_beamsplitter_state(delta, q).point.mean_photons;
      const double brute =
          exhaustive_pair_search(delta, overlap_for_error(q), 64)
              .best_mean_photons;
      worst = std::max(worst, std::abs(analytic - brute));
    }
    results.push_back(
        verify_detail::make("pair-search delta=" + name, 1e-9, worst));
  }
  return results;
}

/// Analytic optimum against the dense simplex-grid scan. The grid bound is
/// coarse by construction: rounding the optimal weights moves the energy by
/// at most ~4.5/R and the modulus window K +- 2/R lets the grid ride the
/// frontier down by at most ~2 c/R, so 8/R covers both sides here.
inline std::vector<CheckResult> verify_dense_grid() {
  std::vector<CheckResult> results;
  {
    const DeviceSpec device({kPi, -kPi});
    const int resolution = 200;
    const double got = dense_grid_search(device, 1, 0.0, resolution);
    results.push_back(verify_detail::make("dense-grid delta=pi cutoff=1 K=0",
                                          8.0 / resolution,
                                          std::abs(got - 0.5)));
  }
  {
    const DeviceSpec device({kPi / 4, -kPi / 4});
    const int resolution = 48;
    const double expected =
        optimal_beamsplitter_state(kPi / 4, 0.1).point.mean_photons;
    const double got = dense_grid_search(device, 4, 0.6, resolution);
    results.push_back(verify_detail::make(
        "dense-grid delta=pi/4 cutoff=4 K=0.6", 8.0 / resolution,
        std::abs(got - expected)));
  }
  {
    const DeviceSpec device({kPi, -kPi});
    const double got = dense_grid_search(device, 1, 1.0, 100);
    results.push_back(
        verify_detail::make("dense-grid K=1 vacuum", 1e-15, std::abs(got)));
  }
  return results;
}

/// Half-space quadrature against the closed-form coherent error.
inline std::vector<CheckResult> verify_gaussian(unsigned seed) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double eta = 10.0 * verify_detail::portable_uniform(rng);
    const double delta_star =
        kPi * std::max(1e-6, verify_detail::portable_uniform(rng));
    const DeviceSpec device({delta_star, -delta_star});
    const double closed = coherent_error(eta, device);
    const double quad = gaussian_halfspace_error(eta, delta_star);
    worst = std::max(worst, std::abs(closed - quad));
  }
  std::vector<CheckResult> results;
  results.push_back(verify_detail::make("gaussian half-space vs closed form",
                                        1e-8, worst));
  const double at_zero = gaussian_halfspace_error(0.0, kPi / 3);
  results.push_back(verify_detail::make("gaussian half-space eta=0", 0.0,
                                        std::abs(at_zero - 0.5)));
  return results;
}

/// Analytic cost gradient against Richardson-checked central differences.
inline std::vector<CheckResult> verify_gradient(unsigned seed) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const DeviceSpec device({kPi / 4, -kPi / 4});
    const TruncatedState state = verify_detail::random_dense_state(rng, 2, 4);
    const double p = 0.1 + 0.8 * verify_detail::portable_uniform(rng);
    const auto analytic = cost_gradient(state, device, p);
    const auto fd = finite_difference_gradient(state, device, p, 1e-7);
    double diff_sq = 0.0;
    double norm_sq = 0.0;
    for (const auto& [index, g] : analytic) {
      norm_sq += std::norm(g);
      diff_sq += std::norm(g - fd.gradient.at(index));
    }
    worst = std::max(worst, std::sqrt(diff_sq / norm_sq));
  }
  return {verify_detail::make("gradient vs finite differences (relative)",
                              1e-6, worst)};
}

/// Production Phi against the quadrature of the Gaussian density.
inline std::vector<CheckResult> verify_phi() {
  const std::vector<double> xs = {0.0, 0.25, 0.5,  1.0, 1.281552,
                                  2.0, 3.0,  4.0, 6.0};
  double worst = 0.0;
  for (double x : xs) {
    worst = std::max(worst,
                     std::abs(normal_cdf(x) - normal_cdf_quadrature(x)));
    worst = std::max(worst,
                     std::abs(normal_cdf(-x) - normal_cdf_quadrature(-x)));
  }
  std::vector<CheckResult> results;
  results.push_back(verify_detail::make("Phi vs quadrature", 1e-12, worst));
  std::mt19937 rng(7);
  double sym = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 12.0 * (2.0 * verify_detail::portable_uniform(rng) - 1.0);
    sym = std::max(sym, std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0));
  }
  results.push_back(verify_detail::make("Phi symmetry", 1e-14, sym));
  return results;
}

/// Runs the requested suite; "all" chains every check.
inline std::vector<CheckResult> run_verification(const std::string& selector,
                                                 unsigned seed) {
  std::vector<CheckResult> results;
  auto append = [&results](std::vector<CheckResult> more) {
    for (auto& r : more) {
      results.push_back(std::move(r));
    }
  };
  if (selector == "pair") {
    append(verify_pair_search());
  } else if (selector == "grid") {
    append(verify_dense_grid());
  } else if (selector == "gaussian") {
    append(verify_gaussian(seed));
  } else if (selector == "gradient") {
    append(verify_gradient(seed));
  } else if (selector == "phi") {
    append(verify_phi());
  } else if (selector == "all") {
    append(verify_pair_search());
    append(verify_dense_grid());
    append(verify_gaussian(seed));
    append(verify_gradient(seed));
    append(verify_phi());
  } else {
    throw domain_error("unknown verification suite: '" + selector + "'");
  }
  return results;
}

}  // namespace optdisc
