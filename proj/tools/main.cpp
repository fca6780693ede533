// Command-line front end: energy-error tradeoff curves for single-use
// discrimination between two diagonal linear passive optical devices.
//
// Subcommands: beamsplitter, general, coherent, compare, verify.
// Exit codes: 0 success, 2 usage/domain error, 3 non-convergence,
// 4 verification failure.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optdisc/beamsplitter.hpp"
#include "optdisc/coherent.hpp"
#include "optdisc/csv.hpp"
#include "optdisc/descriptor.hpp"
#include "optdisc/fock.hpp"
#include "optdisc/optimizer.hpp"
#include "optdisc/oracle.hpp"
#include "optdisc/verify.hpp"
#include "optdisc/version.hpp"

namespace {

using namespace optdisc;

std::string joined_command(int argc, char** argv) {
  std::string out = "optdisc";
  for (int i = 1; i < argc; ++i) {
    out += ' ';
    out += argv[i];
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path);
  if (!file) {
    throw domain_error("cannot open output file '" + path + "'");
  }
  file << content;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> values;
  if (text.empty()) {
    return values;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    const std::string token = text.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw domain_error("malformed number '" + token + "' in " + flag);
    }
    values.push_back(value);
    if (pos == std::string::npos) {
      break;
    }
    start = pos + 1;
  }
  return values;
}

struct GridFlags {
  double q_min = 0.01;
  double q_max = 0.49;
  int points = 25;
  std::string q_list;

  std::vector<double> grid() const {
    if (!q_list.empty()) {
      return parse_double_list(q_list, "--q-list");
    }
    if (points < 1) {
      throw domain_error("--points must be at least 1");
    }
    if (q_min > q_max) {
      throw domain_error("--q-min must not exceed --q-max");
    }
    std::vector<double> qs;
    qs.reserve(points);
    for (int i = 0; i < points; ++i) {
      qs.push_back(points == 1 ? q_min
                               : q_min + (q_max - q_min) * i / (points - 1));
    }
    return qs;
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags* grid) {
  cmd->add_option("--q-min", grid->q_min, "Smallest error threshold");
  cmd->add_option("--q-max", grid->q_max, "Largest error threshold");
  cmd->add_option("--points", grid->points, "Number of grid points");
  cmd->add_option("--q-list", grid->q_list,
                  "Comma-separated error thresholds (overrides the range)");
}

double resolve_delta(const std::optional<double>& delta,
                     const std::optional<double>& delta_frac_pi) {
  if (delta.has_value() == delta_frac_pi.has_value()) {
    throw domain_error("give exactly one of --delta or --delta-frac-pi");
  }
  return delta.has_value() ? *delta : *delta_frac_pi * kPi;
}

template <typename Fn>
std::vector<TradeoffPoint> sweep_concurrently(const std::vector<double>& qs,
                                              Fn&& point_for) {
  std::vector<std::future<TradeoffPoint>> futures;
  futures.reserve(qs.size());
  for (double q : qs) {
    futures.push_back(std::async(std::launch::async, point_for, q));
  }
  std::vector<TradeoffPoint> points;
  points.reserve(qs.size());
  for (auto& f : futures) {
    points.push_back(f.get());
  }
  return points;
}

int run_beamsplitter(double delta_raw, const GridFlags& grid,
                     const std::string& output,
                     const std::string& command_line) {
  const double delta = canonical_beamsplitter_delta(delta_raw);
  if (delta == 0.0) {
    throw devices_identical_error("--delta 0: devices identical");
  }
  const std::vector<double> qs = grid.grid();
  for (double q : qs) {
    if (!(q > 0.0 && q <= 0.5)) {
      throw domain_error("error threshold " + std::to_string(q) +
                         " outside (0, 1/2] in the q grid");
    }
  }
  auto points = sweep_concurrently(qs, [delta](double q) {
    return optimal_beamsplitter_state(delta, q).point;
  });
  write_output(output, points_csv(points, command_line));
  return 0;
}

int run_coherent(const std::vector<double>& phases, const GridFlags& grid,
                 const std::string& output, const std::string& command_line) {
  const DeviceSpec device(phases);
  if (device.all_phases_zero()) {
    throw devices_identical_error("all phases are zero: devices identical");
  }
  const std::vector<double> qs = grid.grid();
  for (double q : qs) {
    if (!(q > 0.0 && q < 0.5)) {
      throw domain_error("error threshold " + std::to_string(q) +
                         " outside (0, 1/2) in the q grid");
    }
  }
  auto points = sweep_concurrently(qs, [&device](double q) {
    const CoherentStrategy strategy = coherent_energy_for_error(q, device);
    return TradeoffPoint(q, strategy.eta, Strategy::coherent_homodyne,
                         coherent_descriptor(strategy.eta, strategy.best_mode));
  });
  write_output(output, points_csv(points, command_line));
  return 0;
}

int run_general(const std::vector<double>& phases, const std::string& p_list,
                OptimizerConfig base, int max_cutoff,
                const std::string& output, const std::string& command_line) {
  const DeviceSpec device(phases);
  const std::vector<double> p_grid = parse_double_list(p_list, "--p-list");
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0)) {
      throw domain_error("tradeoff weight " + std::to_string(p) +
                         " outside (0, 1) in --p-list");
    }
  }
  if (max_cutoff < base.cutoff) {
    throw domain_error("--max-cutoff must be at least --cutoff");
  }
  if (p_grid.empty()) {
    write_output(output, frontier_csv({}, command_line));
    return 0;
  }

  // Truncation control: double the cutoff until no raw frontier point moves
  // by 1e-6 in either coordinate, within the --max-cutoff budget.
  FrontierResult result = trace_frontier(device, p_grid, base);
  bool stable = base.cutoff * 2 > max_cutoff;  // nothing to compare against
  while (base.cutoff * 2 <= max_cutoff) {
    OptimizerConfig next = base;
    next.cutoff = base.cutoff * 2;
    FrontierResult refined = trace_frontier(device, p_grid, next);
    double moved = 0.0;
    for (std::size_t i = 0; i < result.raw.size(); ++i) {
      moved = std::max(moved, std::abs(refined.raw[i].point.p_error -
                                       result.raw[i].point.p_error));
      moved = std::max(moved, std::abs(refined.raw[i].point.mean_photons -
                                       result.raw[i].point.mean_photons));
    }
    result = std::move(refined);
    base = next;
    if (moved < 1e-6) {
      stable = true;
      break;
    }
  }

  write_output(output, frontier_csv(result.points, command_line));
  bool all_converged = true;
  for (const auto& fp : result.raw) {
    all_converged = all_converged && fp.converged;
  }
  return (all_converged && stable) ? 0 : 3;
}

int run_compare(double delta_raw, double q, const std::string& output,
                const std::string& command_line) {
  const double delta = canonical_beamsplitter_delta(delta_raw);
  if (delta == 0.0) {
    throw devices_identical_error("--delta 0: devices identical");
  }
  if (!(q > 0.0 && q < 0.5)) {
    throw domain_error("--q must lie in (0, 1/2)");
  }
  const DeviceSpec device({delta, -delta});
  const BeamsplitterOptimum optimum = optimal_beamsplitter_state(delta, q);
  const CoherentStrategy strategy = coherent_energy_for_error(q, device);
  const double ratio = advantage_ratio(device, q);

  std::string out = csv_preamble(command_line);
  out += "quantity,value\n";
  out += "delta," + format_g17(delta) + "\n";
  out += "q," + format_g17(q) + "\n";
  out += "optimal_n_star," + std::to_string(optimum.n_star) + "\n";
  out += "optimal_mean_photons," + format_g17(optimum.point.mean_photons) + "\n";
  out += "optimal_energy," + format_g17(optimum.point.energy) + "\n";
  out += "coherent_eta," + format_g17(strategy.eta) + "\n";
  out += "coherent_energy," + format_g17(0.5 + strategy.eta) + "\n";
  out += "advantage_ratio," + format_g17(ratio) + "\n";
  write_output(output, out);
  return 0;
}

int run_verify(const std::string& selector, unsigned seed,
               const std::string& output) {
  const std::vector<CheckResult> results = run_verification(selector, seed);
  std::string report = std::string("# optdisc ") + OPTDISC_VERSION + "\n";
  bool all_passed = true;
  for (const CheckResult& r : results) {
    report += r.passed ? "[PASS] " : "[FAIL] ";
    report += r.name + " (tolerance " + format_g17(r.tolerance) +
              ", observed " + format_g17(r.observed) + ")\n";
    all_passed = all_passed && r.passed;
  }
  report += all_passed ? "verification passed\n" : "verification FAILED\n";
  write_output(output, report);
  return all_passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-error tradeoffs for discriminating linear passive "
               "optical devices"};
  app.require_subcommand(1);
  // shared --output/--seed stay valid after the subcommand name
  app.fallthrough();
  const std::string command_line = joined_command(argc, argv);

  std::string output;
  unsigned seed = 1;
  app.add_option("--output", output, "Output path (default: stdout)")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized components")
      ->capture_default_str();

  std::optional<double> delta;
  std::optional<double> delta_frac_pi;
  GridFlags bs_grid;
  auto* bs = app.add_subcommand(
      "beamsplitter",
      "Exact optimal tradeoff curve for identity vs diag(e^{id}, e^{-id})");
  bs->add_option("--delta", delta, "Beamsplitter phase in radians");
  bs->add_option("--delta-frac-pi", delta_frac_pi, "Phase as a multiple of pi");
  add_grid_flags(bs, &bs_grid);

  std::string phases_text;
  std::string p_list;
  OptimizerConfig base;
  int max_cutoff = 64;
  auto* general = app.add_subcommand(
      "general", "Iterative frontier for any diagonal passive device");
  general->add_option("--phases", phases_text,
                      "Comma-separated per-mode phases in radians")
      ->required();
  general->add_option("--p-list", p_list,
                      "Comma-separated tradeoff weights in (0, 1)");
  general->add_option("--cutoff", base.cutoff, "Total-photon truncation")
      ->capture_default_str();
  general->add_option("--alpha", base.alpha, "Initial step size")
      ->capture_default_str();
  general->add_option("--max-iters", base.max_iters, "Iteration limit")
      ->capture_default_str();
  general->add_option("--tol", base.grad_tol, "Relative-decrease threshold")
      ->capture_default_str();
  general->add_option("--max-cutoff", max_cutoff,
                      "Truncation ceiling for the cutoff-doubling loop")
      ->capture_default_str();

  std::string coherent_phases;
  GridFlags coh_grid;
  auto* coherent = app.add_subcommand(
      "coherent", "Coherent-input/homodyne baseline tradeoff curve");
  coherent->add_option("--phases", coherent_phases,
                       "Comma-separated per-mode phases in radians")
      ->required();
  add_grid_flags(coherent, &coh_grid);

  std::optional<double> cmp_delta;
  std::optional<double> cmp_delta_frac_pi;
  double cmp_q = 0.1;
  auto* compare = app.add_subcommand(
      "compare", "Optimal vs coherent photon budgets for a beamsplitter");
  compare->add_option("--delta", cmp_delta, "Beamsplitter phase in radians");
  compare->add_option("--delta-frac-pi", cmp_delta_frac_pi,
                      "Phase as a multiple of pi");
  compare->add_option("--q", cmp_q, "Error threshold")->capture_default_str();

  std::string selector = "all";
  auto* verify = app.add_subcommand("verify", "Run the oracle agreement suites");
  verify->add_option("suite", selector,
                     "all | pair | grid | gaussian | gradient | phi")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bs->parsed()) {
      return run_beamsplitter(resolve_delta(delta, delta_frac_pi), bs_grid,
                              output, command_line);
    }
    if (general->parsed()) {
      base.seed = seed;
      return run_general(parse_double_list(phases_text, "--phases"), p_list,
                         base, max_cutoff, output, command_line);
    }
    if (coherent->parsed()) {
      return run_coherent(parse_double_list(coherent_phases, "--phases"),
                          coh_grid, output, command_line);
    }
    if (compare->parsed()) {
      return run_compare(resolve_delta(cmp_delta, cmp_delta_frac_pi), cmp_q,
                         output, command_line);
    }
    if (verify->parsed()) {
      return run_verify(selector, seed, output);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
