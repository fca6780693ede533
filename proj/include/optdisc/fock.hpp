#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace optdisc {

using complexd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Norm bookkeeping: states must stay unit-norm to 1e-12; constructors repair
// drift up to 1e-9 and reject anything larger.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kRenormWindow = 1e-9;
inline constexpr double kClampWindow = 1e-12;

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct devices_identical_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct infeasible_state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Wraps an angle into the canonical interval (-pi, pi].
inline double wrap_phase(double x) {
  if (!std::isfinite(x)) {
    throw domain_error("phase must be finite");
  }
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y <= 0.0) {
    y += 2.0 * kPi;
  }
  return y - kPi;
}

/// Occupation numbers (n_1, ..., n_M), one per optical mode.
class FockIndex {
 public:
  FockIndex(std::initializer_list<int> occupation)
      : FockIndex(std::vector<int>(occupation)) {}

  explicit FockIndex(std::vector<int> occupation)
      : occupation_(std::move(occupation)) {
    if (occupation_.empty()) {
      throw domain_error("FockIndex needs at least one mode");
    }
    for (int n : occupation_) {
      if (n < 0) {
        throw domain_error("occupation numbers must be non-negative");
      }
    }
  }

  int total() const {
    return std::accumulate(occupation_.begin(), occupation_.end(), 0);
  }

  int mode_count() const { return static_cast<int>(occupation_.size()); }

  const std::vector<int>& occupation() const { return occupation_; }

  int operator[](int mode) const { return occupation_[mode]; }

  auto operator<=>(const FockIndex&) const = default;

 private:
  std::vector<int> occupation_;
};

/// A diagonal linear passive device: one phase per mode, each photon in mode
/// i acquires exp(i * delta_i). Phases are stored wrapped into (-pi, pi].
class DeviceSpec {
 public:
  explicit DeviceSpec(std::vector<double> phases) {
    if (phases.empty()) {
      throw domain_error("device needs at least one mode");
    }
    phases_.reserve(phases.size());
    for (double d : phases) {
      phases_.push_back(wrap_phase(d));
    }
  }

  int mode_count() const { return static_cast<int>(phases_.size()); }

  const std::vector<double>& phases() const { return phases_; }

  /// Total phase acquired by a basis vector: sum_i delta_i * n_i.
  double phase_dot(const FockIndex& index) const {
    if (index.mode_count() != mode_count()) {
      throw dimension_error("index has " + std::to_string(index.mode_count()) +
                            " modes, device has " +
                            std::to_string(mode_count()));
    }
    double acc = 0.0;
    for (int i = 0; i < mode_count(); ++i) {
      acc += phases_[i] * index[i];
    }
    return acc;
  }

  /// Index of the mode with the largest |delta_i|; ties go to the lowest.
  int dominant_mode() const {
    int best = 0;
    for (int i = 1; i < mode_count(); ++i) {
      if (std::abs(phases_[i]) > std::abs(phases_[best])) {
        best = i;
      }
    }
    return best;
  }

  /// Signed phase of the dominant mode.
  double dominant_phase() const { return phases_[dominant_mode()]; }

  bool all_phases_zero(double tol = 0.0) const {
    for (double d : phases_) {
      if (std::abs(d) > tol) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<double> phases_;
};

/// Pure state over the multimode Fock basis truncated at a total photon
/// number. Storage is sparse: only indices with non-zero amplitude appear.
class TruncatedState {
 public:
  using amplitude_map = std::map<FockIndex, complexd>;

  /// Strict constructor: accepts states whose norm drifted by at most 1e-9
  /// from unity, renormalizes them exactly, and rejects anything worse.
  TruncatedState(int cutoff, amplitude_map amplitudes)
      : TruncatedState(cutoff, std::move(amplitudes), kRenormWindow) {}

  /// Normalizes an arbitrary non-zero amplitude vector.
  static TruncatedState normalized(int cutoff, amplitude_map amplitudes) {
    return TruncatedState(cutoff, std::move(amplitudes), 1e300);
  }

  static TruncatedState vacuum(int mode_count, int cutoff) {
    amplitude_map amps;
    amps.emplace(FockIndex(std::vector<int>(mode_count, 0)), complexd(1.0, 0.0));
    return TruncatedState(cutoff, std::move(amps));
  }

  int cutoff() const { return cutoff_; }
  int mode_count() const { return mode_count_; }
  const amplitude_map& amplitudes() const { return amplitudes_; }

  double squared_norm() const {
    double acc = 0.0;
    for (const auto& [index, amp] : amplitudes_) {
      acc += std::norm(amp);
    }
    return acc;
  }

 private:
  TruncatedState(int cutoff, amplitude_map amplitudes, double norm_window)
      : cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
    if (cutoff_ < 0) {
      throw domain_error("cutoff must be non-negative");
    }
    for (auto it = amplitudes_.begin(); it != amplitudes_.end();) {
      if (it->second == complexd(0.0, 0.0)) {
        it = amplitudes_.erase(it);
      } else {
        ++it;
      }
    }
    if (amplitudes_.empty()) {
      throw domain_error("state must have at least one non-zero amplitude");
    }
    mode_count_ = amplitudes_.begin()->first.mode_count();
    for (const auto& [index, amp] : amplitudes_) {
      if (index.mode_count() != mode_count_) {
        throw dimension_error("inconsistent mode counts among amplitudes");
      }
      if (index.total() > cutoff_) {
        throw domain_error("index with " + std::to_string(index.total()) +
                           " photons exceeds cutoff " +
                           std::to_string(cutoff_));
      }
      if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
        throw domain_error("amplitudes must be finite");
      }
    }
    const double norm = std::sqrt(squared_norm());
    if (norm <= 0.0) {
      throw domain_error("state must have non-zero norm");
    }
    if (std::abs(norm - 1.0) > norm_window) {
      throw domain_error("state norm " + std::to_string(norm) +
                         " outside the renormalization window");
    }
    if (norm != 1.0) {
      for (auto& [index, amp] : amplitudes_) {
        amp /= norm;
      }
    }
  }

  int cutoff_;
  int mode_count_;
  amplitude_map amplitudes_;
};

/// <psi|U|psi> for a diagonal device: sum_k |a_k|^2 exp(i delta.k).
inline complexd expect_unitary(const TruncatedState& state,
                               const DeviceSpec& device) {
  if (state.mode_count() != device.mode_count()) {
    throw dimension_error("state has " + std::to_string(state.mode_count()) +
                          " modes, device has " +
                          std::to_string(device.mode_count()));
  }
  complexd acc(0.0, 0.0);
  for (const auto& [index, amp] : state.amplitudes()) {
    acc += std::norm(amp) * std::polar(1.0, device.phase_dot(index));
  }
  return acc;
}

/// <psi|N|psi>: mean total photon number.
inline double mean_photons(const TruncatedState& state) {
  double acc = 0.0;
  for (const auto& [index, amp] : state.amplitudes()) {
    acc += std::norm(amp) * index.total();
  }
  return acc;
}

/// Helstrom error for pure states at a given |<psi|U|psi>|:
/// P_e = (1 - sqrt(1 - m^2)) / 2.
inline double error_probability(double overlap_modulus) {
  if (!(overlap_modulus >= -kClampWindow &&
        overlap_modulus <= 1.0 + kClampWindow)) {
    throw domain_error("overlap modulus " + std::to_string(overlap_modulus) +
                       " outside [0, 1]");
  }
  const double m = std::clamp(overlap_modulus, 0.0, 1.0);
  return 0.5 * (1.0 - std::sqrt(1.0 - m * m));
}

/// Overlap level K = sqrt(4q(1-q)) equivalent to an error threshold q;
/// inverse of error_probability on [0, 1/2].
inline double overlap_for_error(double q) {
  if (!(q >= 0.0 && q <= 0.5)) {
    throw domain_error("error threshold " + std::to_string(q) +
                       " outside [0, 1/2]");
  }
  return std::sqrt(4.0 * q * (1.0 - q));
}

/// Applies the diagonal device: each amplitude picks up exp(i delta.k).
/// Photon-number distribution (and hence the norm) is untouched.
inline TruncatedState evolve(const TruncatedState& state,
                             const DeviceSpec& device) {
  if (state.mode_count() != device.mode_count()) {
    throw dimension_error("state has " + std::to_string(state.mode_count()) +
                          " modes, device has " +
                          std::to_string(device.mode_count()));
  }
  TruncatedState::amplitude_map amps;
  for (const auto& [index, amp] : state.amplitudes()) {
    amps.emplace(index, amp * std::polar(1.0, device.phase_dot(index)));
  }
  return TruncatedState(state.cutoff(), std::move(amps));
}

enum class Strategy {
  analytic_beamsplitter,
  iterative,
  coherent_homodyne,
  oracle,
};

inline std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::analytic_beamsplitter:
      return "analytic-beamsplitter";
    case Strategy::iterative:
      return "iterative";
    case Strategy::coherent_homodyne:
      return "coherent-homodyne";
    case Strategy::oracle:
      return "oracle";
  }
  throw std::logic_error("unreachable strategy tag");
}

/// One point of an energy-error tradeoff curve. The energy column is always
/// the mean photon number plus the 1/2 offset used throughout.
struct TradeoffPoint {
  double p_error;
  double mean_photons;
  double energy;
  Strategy strategy;
  std::string state_descriptor;

  TradeoffPoint(double p_error_in, double mean_photons_in, Strategy strategy_in,
                std::string descriptor_in)
      : p_error(p_error_in),
        mean_photons(mean_photons_in),
        energy(0.5 + mean_photons_in),
        strategy(strategy_in),
        state_descriptor(std::move(descriptor_in)) {
    if (!(p_error >= -kClampWindow && p_error <= 0.5 + kClampWindow)) {
      throw domain_error("error probability outside [0, 1/2]");
    }
    if (!(mean_photons >= -kClampWindow)) {
      throw domain_error("mean photon number must be non-negative");
    }
  }
};

}  // namespace optdisc
