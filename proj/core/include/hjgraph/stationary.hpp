#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hjgraph/cost_model.hpp"

namespace hjg {

/// Solution of the discounted Bellman equation -r u_i + H(i, (u_j - u_i)_j) = 0.
struct StationaryValue {
  double discount = 0.0;
  std::vector<double> u;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool used_fallback = false;
};

struct StationaryOptions {
  /// Newton starting point; zeros when absent.
  std::optional<std::vector<double>> initial_guess;
  std::size_t max_newton_iterations = 200;
  /// Step budget of the time-integration fallback.
  std::size_t max_fallback_steps = 2'000'000;
};

/// max_i |-r u_i + H(i, (u_j - u_i)_j)|; +inf if H overflows.
double stationary_residual(const CostModel& model, double r, std::span<const double> u);

/// Damped Newton on the Bellman equation. The Jacobian row i has diagonal
/// -r - sum_j lambda*_ij and off-diagonal lambda*_ij (the maximizing
/// intensities are the gradient of H). The step is halved until the residual
/// decreases. If Newton stagnates, dV/ds = H(i, dV) - r V is integrated forward
/// until |dV/ds| < 1e-10 and Newton is restarted from there.
/// Succeeds when residual <= 1e-10 (1 + max|u|); throws NoConvergence otherwise.
StationaryValue solve_stationary(const CostModel& model, double r, const StationaryOptions& options = {});

struct StationaryComparisonReport {
  double margin = 0.0;  // min_i (w_i - v_i)
  bool passed = true;   // v <= w up to 1e-9 (1 + max|w|)
};

/// Discounted comparison: if -eps v_i + H(i, dv) >= -eps w_i + H(i, dw) at every
/// node then v <= w. Throws HypothesisUnmet when the premise fails numerically.
StationaryComparisonReport verify_stationary_comparison(const CostModel& model, double eps, std::span<const double> v,
                                                        std::span<const double> w);

}  // namespace hjg
