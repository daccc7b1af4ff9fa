#include "commands.hpp"

#include "problem_file.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace hjg::cli {

namespace {

using nlohmann::ordered_json;

/// Command failed with a specific exit code after reporting to err.
struct Exit {
  int code;
};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string csv_row(double head, std::span<const double> tail) {
  std::string line = format_number(head);
  for (double x : tail) {
    line += ',';
    line += format_number(x);
  }
  line += '\n';
  return line;
}

ordered_json json_array(std::span<const double> xs) {
  ordered_json a = ordered_json::array();
  for (double x : xs) a.push_back(x);
  return a;
}

void write_json(std::ostream& os, const ordered_json& doc) { os << doc.dump(2) << '\n'; }

const char* method_name(ErgodicMethod m) {
  return m == ErgodicMethod::VanishingDiscount ? "vanishing_discount" : "direct";
}

ordered_json ergodic_json(const ErgodicSolution& s) {
  ordered_json doc;
  doc["gamma"] = s.gamma;
  doc["xi"] = json_array(s.xi);
  if (s.q_infinity) doc["q_infinity"] = *s.q_infinity;
  doc["method"] = method_name(s.method);
  doc["residual"] = s.residual;
  doc["refined"] = s.refined;
  doc["non_unique_corrector"] = s.non_unique_corrector;
  ordered_json diagnostics = ordered_json::array();
  for (const auto& d : s.diagnostics) {
    diagnostics.push_back({{s.method == ErgodicMethod::VanishingDiscount ? "discount" : "time", d.parameter},
                           {"value", d.value}});
  }
  doc["diagnostics"] = std::move(diagnostics);
  return doc;
}

ErgodicSolution run_vanishing(const Problem& problem, const ProblemFile& file) {
  VanishingDiscountOptions options;
  options.discounts = discount_sequence(file);
  return solve_ergodic_vanishing_discount(problem.model, options);
}

ErgodicSolution run_direct(const Problem& problem, const ProblemFile& file) {
  DirectOptions options;
  options.t_max = direct_t_max(file);
  options.initial_data = problem.terminal_payoff;
  return solve_ergodic_direct(problem.model, options);
}

struct Loaded {
  ProblemFile file;
  Problem problem;
};

Loaded load(const std::string& path) {
  ProblemFile file = read_problem_file(path);
  Problem problem = to_problem(file);
  return {std::move(file), std::move(problem)};
}

int cmd_solve(const std::string& input, const std::string& output, const std::string& summary, std::ostream& out,
              std::ostream& err) {
  const Loaded in = load(input);
  const ValueTrajectory traj = solve_finite_horizon(in.problem, tolerances(in.file));

  std::string header = "t";
  for (std::size_t i = 1; i <= traj.node_count; ++i) header += ",V_" + std::to_string(i);
  Sink csv(output, out);
  csv.stream() << header << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) csv.stream() << csv_row(traj.grid[k], traj.at(k));

  ordered_json doc;
  doc["value_at_0"] = json_array(traj.at(0));
  doc["max_residual"] = traj.max_residual;
  doc["steps"] = traj.step_count;
  doc["rejected_steps"] = traj.rejected_steps;
  const bool csv_on_stdout = output.empty() || output == "-";
  Sink sum(summary, summary.empty() && csv_on_stdout ? err : out);
  write_json(sum.stream(), doc);
  return Ok;
}

int cmd_policy(const std::string& input, const std::string& output, std::ostream& out) {
  const Loaded in = load(input);
  const ValueTrajectory traj = solve_finite_horizon(in.problem, tolerances(in.file));
  const Policy policy = extract_policy(in.problem, traj);
  const Graph& graph = in.problem.model.graph();

  std::string header = "t";
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    header += ",lambda_" + std::to_string(graph.edge(e).from + 1) + "_" + std::to_string(graph.edge(e).to + 1);
  }
  Sink csv(output, out);
  csv.stream() << header << '\n';
  for (std::size_t k = 0; k < policy.row_count(); ++k) csv.stream() << csv_row(policy.grid()[k], policy.row(k));
  return Ok;
}

int cmd_ergodic(const std::string& input, const std::string& method, const std::string& output, std::ostream& out,
                std::ostream& err) {
  const Loaded in = load(input);
  ordered_json doc;
  int code = Ok;
  if (method == "vanishing") {
    doc = ergodic_json(run_vanishing(in.problem, in.file));
  } else if (method == "direct") {
    doc = ergodic_json(run_direct(in.problem, in.file));
  } else {
    const ErgodicSolution vd = run_vanishing(in.problem, in.file);
    const ErgodicSolution direct = run_direct(in.problem, in.file);
    const double gap = std::abs(vd.gamma - direct.gamma);
    doc["gamma"] = vd.gamma;
    doc["xi"] = json_array(vd.xi);
    if (direct.q_infinity) doc["q_infinity"] = *direct.q_infinity;
    doc["method"] = "both";
    doc["gamma_difference"] = gap;
    doc["non_unique_corrector"] = vd.non_unique_corrector;
    doc["diagnostics"] = ordered_json::array();
    doc["vanishing_discount"] = ergodic_json(vd);
    doc["direct"] = ergodic_json(direct);
    if (gap > 1e-5) {
      err << "error: ergodic constants disagree (" << format_number(vd.gamma) << " vs " << format_number(direct.gamma)
          << ")\n";
      code = MethodDisagreement;
    }
  }
  if (doc.value("non_unique_corrector", false)) {
    err << "warning: costs are not strictly monotone; the corrector may not be unique\n";
  }
  Sink sink(output, out);
  write_json(sink.stream(), doc);
  return code;
}

int cmd_simulate(const std::string& input, std::size_t paths, std::uint64_t seed, std::size_t start,
                 const std::string& output, std::ostream& out, std::ostream& err) {
  if (paths == 0) throw InputError("--paths must be at least 1");
  const Loaded in = load(input);
  if (start < 1 || start > in.file.nodes) throw InputError("--start must be a node in 1.." + std::to_string(in.file.nodes));
  const ValueTrajectory traj = solve_finite_horizon(in.problem, tolerances(in.file));
  const Policy policy = extract_policy(in.problem, traj);
  const SimulationReport report = simulate(in.problem, policy, start - 1, paths, seed);
  const double reference = traj.value(0, start - 1);

  ordered_json doc;
  doc["mean"] = report.mean_objective;
  doc["std_error"] = report.std_error;
  doc["reference_value"] = reference;
  int code = Ok;
  try {
    const double z = estimate_value_gap(report, reference);
    doc["z_score"] = z;
    if (std::abs(z) > 3.0) {
      err << "error: |z| = " << format_number(std::abs(z)) << " exceeds 3\n";
      code = StatisticalMismatch;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroVariance) throw;
    doc["z_score"] = nullptr;
    err << "error: " << e.what() << '\n';
    code = StatisticalMismatch;
  }
  doc["paths"] = paths;
  doc["seed"] = seed;
  doc["start"] = start;
  Sink sink(output, out);
  write_json(sink.stream(), doc);
  return code;
}

std::vector<double> parse_horizons(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double value = 0.0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !(value > 0.0) || !std::isfinite(value)) {
      throw InputError("invalid horizon '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw InputError("--horizons must list at least one horizon");
  return out;
}

int cmd_asymptotics(const std::string& input, const std::string& horizons_text, const std::string& output,
                    std::ostream& out, std::ostream& err) {
  const std::vector<double> horizons = parse_horizons(horizons_text);
  const Loaded in = load(input);
  const Problem base = in.problem.with_discount(0.0);
  const ErgodicSolution limit = run_direct(base, in.file);
  if (!limit.q_infinity) throw Error(ErrorCode::NoConvergence, "q(t) has not converged by t_max");
  const Tolerances tol = tolerances(in.file);

  std::vector<double> deviations;
  for (double T : horizons) {
    const ValueTrajectory traj = solve_finite_horizon(base.with_horizon(T), tol);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.node_count; ++i) {
      worst = std::max(worst, std::abs(traj.value(0, i) - (limit.gamma * T + limit.xi[i] + *limit.q_infinity)));
    }
    deviations.push_back(worst);
  }

  Sink csv(output, out);
  csv.stream() << "T,deviation\n";
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    csv.stream() << format_number(horizons[k]) << ',' << format_number(deviations[k]) << '\n';
  }
  for (std::size_t k = 1; k < deviations.size(); ++k) {
    if (deviations[k] > deviations[k - 1] + 1e-8) {
      err << "error: deviation increased from T=" << format_number(horizons[k - 1]) << " to T="
          << format_number(horizons[k]) << '\n';
      return AsymptoticsViolation;
    }
  }
  return Ok;
}

int cmd_random(const RandomInstanceSpec& spec, const std::string& family, std::uint64_t seed,
               const std::string& output, std::ostream& out) {
  RandomInstanceSpec s = spec;
  if (family == "entropic") {
    s.families = FamilyMix::Entropic;
  } else if (family == "quadratic") {
    s.families = FamilyMix::Quadratic;
  } else {
    s.families = FamilyMix::Mixed;
  }
  try {
    Sink sink(output, out);
    sink.stream() << serialize(from_problem(random_problem(s, seed)));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return Ok;
}

int cmd_validate(const std::string& input, std::size_t samples, std::uint64_t seed, const std::string& output,
                 std::ostream& out) {
  const Loaded in = load(input);
  if (samples < 100) throw InputError("--samples must be at least 100");
  const ValidationReport report = validate_assumptions(in.problem.model, samples, seed);
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    entry["asserted"] = c.asserted;
    entry["samples"] = c.samples;
    if (!c.witness.empty()) entry["witness"] = c.witness;
    checks.push_back(std::move(entry));
  }
  ordered_json doc;
  doc["all_passed"] = report.all_passed();
  doc["strict_monotone"] = in.problem.model.strict_monotone();
  doc["checks"] = std::move(checks);
  Sink sink(output, out);
  write_json(sink.stream(), doc);
  return report.all_passed() ? Ok : InputFailure;
}

int cmd_format(const std::string& input, const std::string& output, std::ostream& out) {
  const ProblemFile file = read_problem_file(input);
  to_problem(file);
  Sink sink(output, out);
  sink.stream() << serialize(file);
  return Ok;
}

}  // namespace

std::string format_number(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal intensity control of Markov chains on graphs", "hjgraph"};
  app.require_subcommand(1);

  std::string input, output, summary, method = "both", horizons = "10,20,40", family = "entropic";
  std::size_t paths = 10000, start = 1, samples = 1000;
  std::uint64_t seed = 1;
  RandomInstanceSpec spec;
  std::function<int()> action;

  const auto add_io = [&](CLI::App* sub) {
    sub->add_option("problem", input, "Problem file (JSON)")->required();
    sub->add_option("-o,--output", output, "Output file (default: stdout)");
  };

  auto* solve = app.add_subcommand("solve", "Finite-horizon value function as CSV t,V_1..V_N");
  add_io(solve);
  solve->add_option("--summary", summary, "JSON summary file (default: stdout, or stderr when the CSV is on stdout)");
  solve->callback([&] { action = [&] { return cmd_solve(input, output, summary, out, err); }; });

  auto* policy = app.add_subcommand("policy", "Optimal intensities as CSV t,lambda_i_j");
  add_io(policy);
  policy->callback([&] { action = [&] { return cmd_policy(input, output, out); }; });

  auto* ergodic = app.add_subcommand("ergodic", "Ergodic constant and corrector as JSON");
  add_io(ergodic);
  ergodic->add_option("--method", method, "both, vanishing or direct")
      ->check(CLI::IsMember({"both", "vanishing", "direct"}));
  ergodic->callback([&] { action = [&] { return cmd_ergodic(input, method, output, out, err); }; });

  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of the optimal policy");
  add_io(sim);
  sim->add_option("--paths", paths, "Number of simulated paths");
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--start", start, "Start node (one-based)");
  sim->callback([&] { action = [&] { return cmd_simulate(input, paths, seed, start, output, out, err); }; });

  auto* asym = app.add_subcommand("asymptotics", "Large-horizon deviation from gamma T + xi + q_infinity");
  add_io(asym);
  asym->add_option("--horizons", horizons, "Comma-separated horizons");
  asym->callback([&] { action = [&] { return cmd_asymptotics(input, horizons, output, out, err); }; });

  auto* validate = app.add_subcommand("validate", "Sampled audit of the cost model assumptions");
  add_io(validate);
  validate->add_option("--samples", samples, "Samples per property (>= 100)");
  validate->add_option("--seed", seed, "Random seed");
  validate->callback([&] { action = [&] { return cmd_validate(input, samples, seed, output, out); }; });

  auto* format = app.add_subcommand("format", "Rewrite a problem file in canonical form");
  add_io(format);
  format->callback([&] { action = [&] { return cmd_format(input, output, out); }; });

  auto* random = app.add_subcommand("random", "Random strongly connected problem file (test fixture)");
  random->add_option("--nodes", spec.nodes, "Number of nodes")->check(CLI::Range(2, 1000));
  random->add_option("--family", family, "entropic, quadratic or mixed")
      ->check(CLI::IsMember({"entropic", "quadratic", "mixed"}));
  random->add_option("--seed", seed, "Random seed");
  random->add_option("--extra-edges", spec.extra_edge_probability, "Probability of each non-cycle edge")
      ->check(CLI::Range(0.0, 1.0));
  random->add_option("--horizon", spec.horizon, "Horizon T")->check(CLI::PositiveNumber);
  random->add_option("--discount", spec.discount, "Discount r")->check(CLI::NonNegativeNumber);
  random->add_option("-o,--output", output, "Output file (default: stdout)");
  random->callback([&] { action = [&] { return cmd_random(spec, family, seed, output, out); }; });

  std::vector<const char*> argv{"hjgraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : InputFailure;
  }

  try {
    return action();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return InputFailure;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return SolverFailure;
  }
}

}  // namespace hjg::cli
