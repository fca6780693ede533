#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "optdisc/fock.hpp"
#include "optdisc/oracle.hpp"

namespace testhelp {

inline double uniform01(std::mt19937& rng) {
  return static_cast<double>(rng()) / 4294967296.0;
}

inline optdisc::TruncatedState random_dense_state(std::mt19937& rng, int modes,
                                                  int cutoff) {
  optdisc::TruncatedState::amplitude_map amps;
  for (const auto& index : optdisc::oracle_detail::basis_indices(modes, cutoff)) {
    amps.emplace(index, optdisc::complexd(2.0 * uniform01(rng) - 1.0,
                                          2.0 * uniform01(rng) - 1.0));
  }
  return optdisc::TruncatedState::normalized(cutoff, std::move(amps));
}

/// Tradeoff weight whose scalarized optimum pins the beamsplitter overlap at
/// K: stationarity of p<N> + (1-p)<U>^2 on the vacuum/NOON-n segment gives
/// <U> = p n / (2 (1-p) (1 - cos(delta n))).
inline double p_for_overlap(double K, int n_star, double delta) {
  const double s = 1.0 - std::cos(delta * n_star);
  return 2.0 * K * s / (n_star + 2.0 * K * s);
}

}  // namespace testhelp
