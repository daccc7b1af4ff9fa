#pragma once

#include <span>
#include <vector>

#include "hjgraph/policy.hpp"
#include "hjgraph/problem.hpp"
#include "hjgraph/runge_kutta.hpp"

namespace hjg {

/// Value function on a uniform grid 0 = t_0 < ... < t_M = T.
struct ValueTrajectory {
  std::size_t node_count = 0;
  std::vector<double> grid;
  std::vector<double> values;  // row-major, grid.size() x node_count
  double max_residual = 0.0;
  std::size_t step_count = 0;
  std::size_t rejected_steps = 0;
  double error_estimate = 0.0;

  std::size_t size() const noexcept { return grid.size(); }
  std::span<const double> at(std::size_t k) const noexcept { return {values.data() + k * node_count, node_count}; }
  double value(std::size_t k, NodeIndex i) const noexcept { return values[k * node_count + i]; }
};

/// Number of output grid points for a horizon: max(256, ceil(64 T)).
std::size_t output_grid_points(double horizon);

/// Solves dV_i/dt = r V_i - H(i, (V_j - V_i)_j), V(T) = g, backward in time.
///
/// Internally integrates W(s) = V(T - s) forward with Dormand-Prince 5(4),
/// landing on every output grid point. values at t_M are a copy of g.
/// Throws StepSizeUnderflow or NumericOverflow.
ValueTrajectory solve_finite_horizon(const Problem& problem, Tolerances tolerances = {});

/// Time-varying optimal feedback: row k holds the maximizing intensities
/// for the payoff differences V_j(t_k) - V_i(t_k).
Policy extract_policy(const Problem& problem, const ValueTrajectory& trajectory);

/// max over interior grid points and nodes of |dV_i/dt - r V_i + H(i, dV)|,
/// with dV/dt from an 11-point finite-difference stencil (centered in the
/// interior, shifted inward next to the ends; all points on short grids).
double residual(const Problem& problem, const ValueTrajectory& trajectory);

struct ComparisonReport {
  double max_violation = 0.0;  // max of V_low - V_high over the grid, clamped at 0
  bool passed = true;          // max_violation <= 1e-8
};

/// Solves the problem with terminal data g_low and g_high (g_low <= g_high)
/// and checks V_low <= V_high at every grid point.
ComparisonReport verify_comparison(const Problem& problem, std::span<const double> g_low,
                                   std::span<const double> g_high, Tolerances tolerances = {});

}  // namespace hjg
