#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hjgraph/policy.hpp"
#include "hjgraph/problem.hpp"

namespace hjg {

struct SimulationReport {
  std::size_t n_paths = 0;
  double mean_objective = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
  std::vector<double> path_values;  // filled when SimulationOptions::keep_paths
  std::uint64_t seed = 0;
  NodeIndex start_node = 0;
};

struct SimulationOptions {
  bool keep_paths = false;
  /// Worker threads; 0 reads HJGRAPH_THREADS, falling back to the hardware count.
  unsigned threads = 0;
};

/// Called on every jump of a simulated path.
using JumpObserver = std::function<void(double time, NodeIndex from, NodeIndex to)>;

/// Simulates one path exactly (competing exponential clocks, resampled at
/// every policy grid boundary) and returns its realized objective
///   -int_0^T e^{-rt} L(X_t, lambda_t(X_t, .)) dt + e^{-rT} g(X_T).
/// The running cost is integrated in closed form over maximal segments on
/// which it is constant. The path's randomness depends only on (seed, path_index).
double simulate_path(const Problem& problem, const Policy& policy, NodeIndex start_node, std::uint64_t seed,
                     std::uint64_t path_index, const JumpObserver& observer = {});

/// Monte Carlo estimate of the objective from start_node. Results are
/// bit-identical for any thread count. Throws PolicyGridMismatch when the
/// policy does not match the problem's edges or does not cover [0, T].
SimulationReport simulate(const Problem& problem, const Policy& policy, NodeIndex start_node, std::size_t n_paths,
                          std::uint64_t seed, const SimulationOptions& options = {});

/// Exact discounted value of a fixed stationary policy: solves
/// r u_i = -L(i, lambda(i, .)) + sum_j lambda(i, j) (u_j - u_i) by dense LU.
/// Throws SingularSystem if the matrix is numerically singular.
std::vector<double> evaluate_stationary_policy(const CostModel& model, const Policy& policy, double r);

/// z = (mean - reference) / std_error. With zero variance, returns 0 when the
/// mean matches the reference within tolerance * (1 + |reference|) and throws
/// ZeroVariance otherwise.
double estimate_value_gap(const SimulationReport& report, double reference, double tolerance = 1e-9);

/// Pairwise (cascade) sum; the result does not depend on how the caller
/// partitioned the work that produced the values.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace hjg
