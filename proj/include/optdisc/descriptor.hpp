#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "optdisc/beamsplitter.hpp"
#include "optdisc/coherent.hpp"
#include "optdisc/fock.hpp"
#include "optdisc/format.hpp"

namespace optdisc {

/// Compact token for a sparse truncated state:
/// fock(cutoff=8;0,0:re:im;3,0:re:im;...). Entries follow map order, so the
/// token is deterministic. Amplitudes below 1e-14 carry weight below 1e-28
/// and are omitted.
inline std::string fock_descriptor(const TruncatedState& state) {
  std::string out = "fock(cutoff=" + std::to_string(state.cutoff());
  for (const auto& [index, amp] : state.amplitudes()) {
    if (std::abs(amp) <= 1e-14) {
      continue;
    }
    out += ';';
    for (int i = 0; i < index.mode_count(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += std::to_string(index[i]);
    }
    out += ':';
    out += format_g17(amp.real());
    out += ':';
    out += format_g17(amp.imag());
  }
  out += ')';
  return out;
}

struct Reevaluation {
  double p_error;
  double mean_photons;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw domain_error("malformed number in descriptor: '" + text + "'");
  }
  return value;
}

inline int parse_int(const std::string& text) {
  const double value = parse_double(text);
  const int n = static_cast<int>(value);
  if (n != value) {
    throw domain_error("expected integer in descriptor: '" + text + "'");
  }
  return n;
}

inline std::string field_value(const std::string& field,
                               const std::string& name) {
  const std::string prefix = name + "=";
  if (field.rfind(prefix, 0) != 0) {
    throw domain_error("descriptor field '" + field + "' should be '" + name +
                       "=...'");
  }
  return field.substr(prefix.size());
}

}  // namespace detail

/// Re-derives (P_e, <N>) for a descriptor emitted by any of the strategies.
/// Rows in the CSV outputs are certificates: this must reproduce their
/// p_error and mean_photons columns.
inline Reevaluation reevaluate_descriptor(const std::string& descriptor,
                                          const DeviceSpec& device) {
  const std::size_t open = descriptor.find('(');
  if (open == std::string::npos || descriptor.back() != ')') {
    throw domain_error("malformed state descriptor: '" + descriptor + "'");
  }
  const std::string kind = descriptor.substr(0, open);
  const std::string body =
      descriptor.substr(open + 1, descriptor.size() - open - 2);
  const std::vector<std::string> fields = detail::split(body, ';');

  if (kind == "noon") {
    if (fields.size() != 2 || device.mode_count() != 2) {
      throw domain_error("noon descriptor needs n, a2 and a two-mode device");
    }
    const int n = detail::parse_int(detail::field_value(fields[0], "n"));
    const double a2 = detail::parse_double(detail::field_value(fields[1], "a2"));
    if (n < 1 || a2 < 0.0 || a2 > 1.0 + kNormTol) {
      throw domain_error("noon descriptor out of range");
    }
    TruncatedState::amplitude_map amps;
    const double vac = std::sqrt(std::max(0.0, 1.0 - a2));
    if (vac > 0.0) {
      amps.emplace(FockIndex{0, 0}, complexd(vac, 0.0));
    }
    const double branch = std::sqrt(a2 / 2.0);
    if (branch > 0.0) {
      amps.emplace(FockIndex{n, 0}, complexd(branch, 0.0));
      amps.emplace(FockIndex{0, n}, complexd(branch, 0.0));
    }
    TruncatedState state(n, std::move(amps));
    return Reevaluation{error_probability(std::abs(expect_unitary(state, device))),
                        mean_photons(state)};
  }

  if (kind == "coherent") {
    if (fields.size() != 2) {
      throw domain_error("coherent descriptor needs eta and mode");
    }
    const double eta =
        detail::parse_double(detail::field_value(fields[0], "eta"));
    const int mode = detail::parse_int(detail::field_value(fields[1], "mode"));
    if (mode < 0 || mode >= device.mode_count()) {
      throw domain_error("coherent descriptor mode out of range");
    }
    return Reevaluation{coherent_error(eta, device), eta};
  }

  if (kind == "fock") {
    if (fields.empty()) {
      throw domain_error("fock descriptor needs a cutoff field");
    }
    const int cutoff =
        detail::parse_int(detail::field_value(fields[0], "cutoff"));
    TruncatedState::amplitude_map amps;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::vector<std::string> parts = detail::split(fields[i], ':');
      if (parts.size() != 3) {
        throw domain_error("malformed fock descriptor entry: '" + fields[i] +
                           "'");
      }
      std::vector<int> occupation;
      for (const std::string& token : detail::split(parts[0], ',')) {
        occupation.push_back(detail::parse_int(token));
      }
      amps.emplace(FockIndex(std::move(occupation)),
                   complexd(detail::parse_double(parts[1]),
                            detail::parse_double(parts[2])));
    }
    TruncatedState state(cutoff, std::move(amps));
    return Reevaluation{error_probability(std::abs(expect_unitary(state, device))),
                        mean_photons(state)};
  }

  throw domain_error("unknown state descriptor kind: '" + kind + "'");
}

}  // namespace optdisc
