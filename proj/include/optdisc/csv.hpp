#pragma once

#include <string>
#include <vector>

#include "optdisc/fock.hpp"
#include "optdisc/format.hpp"
#include "optdisc/optimizer.hpp"
#include "optdisc/version.hpp"

namespace optdisc {

/// Quotes a CSV field when it contains separators; inner quotes double up.
inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) {
    return value;
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') {
      quoted += "\"\"";
    } else {
      quoted += c;
    }
  }
  quoted += '"';
  return quoted;
}

inline std::string csv_preamble(const std::string& command_line) {
  return std::string("# optdisc ") + OPTDISC_VERSION + "\n# command: " +
         command_line + "\n";
}

inline std::string tradeoff_row(const TradeoffPoint& point) {
  return format_g17(point.p_error) + "," + format_g17(point.mean_photons) +
         "," + format_g17(point.energy) + "," + to_string(point.strategy) +
         "," + csv_field(point.state_descriptor);
}

/// Curve CSV: comment preamble, column header, one row per point.
inline std::string points_csv(const std::vector<TradeoffPoint>& points,
                              const std::string& command_line) {
  std::string out = csv_preamble(command_line);
  out += "p_error,mean_photons,energy,strategy,state_descriptor\n";
  for (const TradeoffPoint& point : points) {
    out += tradeoff_row(point);
    out += '\n';
  }
  return out;
}

/// Frontier CSV: same schema plus per-row convergence and cutoff columns.
inline std::string frontier_csv(const std::vector<FrontierPoint>& points,
                                const std::string& command_line) {
  std::string out = csv_preamble(command_line);
  out += "p_error,mean_photons,energy,strategy,state_descriptor,converged,"
         "cutoff\n";
  for (const FrontierPoint& fp : points) {
    out += tradeoff_row(fp.point);
    out += fp.converged ? ",true," : ",false,";
    out += std::to_string(fp.cutoff);
    out += '\n';
  }
  return out;
}

/// Splits one CSV row into fields, honouring quoting. For tests and tooling.
inline std::vector<std::string> csv_split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

}  // namespace optdisc
