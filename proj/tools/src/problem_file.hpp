#pragma once

#include <hjgraph/hjgraph.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hjg::cli {

/// Malformed or inconsistent problem file; maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverSettings {
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> t_max;
  std::optional<double> r_min;
  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

/// One edge as written in the file; endpoints are one-based.
struct EdgeSpec {
  std::size_t from = 0;
  std::size_t to = 0;
  CostFamily family = CostFamily::Entropic;
  double scale = 1.0;
  double shift = 0.0;
  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct ProblemFile {
  std::size_t nodes = 0;
  std::vector<EdgeSpec> edges;
  std::vector<double> terminal_payoff;
  double horizon = 1.0;
  double discount = 0.0;
  SolverSettings solver;
  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

/// Parses the JSON document. Syntax errors report line and column; schema
/// errors name the offending key or edge. Unknown keys are rejected.
ProblemFile parse_problem_file(std::string_view text);
ProblemFile read_problem_file(const std::string& path);

/// Canonical form: fixed key order, two-space indent, trailing newline.
std::string serialize(const ProblemFile& file);

/// Builds the library problem. Throws InputError naming the offending edge.
Problem to_problem(const ProblemFile& file);
ProblemFile from_problem(const Problem& problem);

Tolerances tolerances(const ProblemFile& file);
/// 2^-n for n = 3, 4, ... down to solver.r_min (default 2^-20).
std::vector<double> discount_sequence(const ProblemFile& file);
double direct_t_max(const ProblemFile& file);

}  // namespace hjg::cli
