#include "hjgraph/finite_horizon.hpp"

#include <algorithm>
#include <cmath>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

// Fornberg's recursion for first-derivative weights at 0 on the given offsets.
void first_derivative_weights(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  std::vector<double> c0(n, 0.0), c1(n, 0.0);
  double a = 1.0;
  double b = x[0];
  c0[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double prod = 1.0;
    const double b_prev = b;
    b = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double diff = x[i] - x[j];
      prod *= diff;
      if (j == i - 1) {
        c1[i] = a * (c0[i - 1] - b_prev * c1[i - 1]) / prod;
        c0[i] = -a * b_prev * c0[i - 1] / prod;
      }
      c1[j] = (b * c1[j] - c0[j]) / diff;
      c0[j] = b * c0[j] / diff;
    }
    a = prod;
  }
  std::copy(c1.begin(), c1.end(), out.begin());
}

}  // namespace

std::size_t output_grid_points(double horizon) {
  return std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(64.0 * horizon)));
}

ValueTrajectory solve_finite_horizon(const Problem& problem, Tolerances tolerances) {
  problem.validate();
  const CostModel& model = problem.model;
  const double r = problem.discount;
  const std::size_t n = model.node_count();

  // W(s) = V(T - s):  dW/ds = H(i, dW) - r W.
  OdeRhs rhs = [&model, r](double, std::span<const double> w, std::span<double> dw) {
    if (!model.try_hamiltonians(w, dw)) return false;
    for (std::size_t i = 0; i < w.size(); ++i) dw[i] -= r * w[i];
    return true;
  };

  const std::size_t points = output_grid_points(problem.horizon);
  const std::size_t intervals = points - 1;
  const UniformSolution reversed = integrate_uniform(rhs, problem.terminal_payoff, problem.horizon, intervals, tolerances);

  ValueTrajectory out;
  out.node_count = n;
  out.grid.resize(points);
  out.values.resize(points * n);
  for (std::size_t k = 0; k < points; ++k) {
    out.grid[k] = problem.horizon * static_cast<double>(k) / static_cast<double>(intervals);
    const auto state = reversed.state(intervals - k);
    std::copy(state.begin(), state.end(), out.values.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  out.grid.back() = problem.horizon;
  std::copy(problem.terminal_payoff.begin(), problem.terminal_payoff.end(),
            out.values.begin() + static_cast<std::ptrdiff_t>(intervals * n));

  out.step_count = reversed.stats.accepted_steps;
  out.rejected_steps = reversed.stats.rejected_steps;
  out.error_estimate = reversed.stats.error_estimate;
  out.max_residual = residual(problem, out);
  return out;
}

Policy extract_policy(const Problem& problem, const ValueTrajectory& trajectory) {
  const CostModel& model = problem.model;
  if (trajectory.node_count != model.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "trajectory does not match the problem's node count");
  }
  const std::size_t edges = model.edge_count();
  std::vector<double> table(trajectory.size() * edges);
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    model.intensities(trajectory.at(k), std::span<double>(table.data() + k * edges, edges));
  }
  return Policy::time_varying(trajectory.grid, std::move(table), edges);
}

double residual(const Problem& problem, const ValueTrajectory& trajectory) {
  const std::size_t points = trajectory.size();
  const std::size_t n = trajectory.node_count;
  if (points < 3) throw Error(ErrorCode::InvalidArgument, "residual needs at least 3 grid points");
  if (n != problem.model.node_count()) throw Error(ErrorCode::InvalidArgument, "trajectory/problem size mismatch");

  const std::size_t last = points - 1;
  const double h = (trajectory.grid[last] - trajectory.grid[0]) / static_cast<double>(last);
  for (std::size_t k = 1; k < points; ++k) {
    if (std::abs(trajectory.grid[k] - trajectory.grid[k - 1] - h) > 1e-9 * h) {
      throw Error(ErrorCode::InvalidArgument, "residual requires a uniform grid");
    }
  }

  // Stencil of up to 11 consecutive grid points around k, shifted inward near the ends.
  const std::size_t width = std::min<std::size_t>(11, points);
  const auto stencil_start = [&](std::size_t k) {
    const std::size_t half = width / 2;
    return std::min(k >= half ? k - half : 0, points - width);
  };
  std::vector<double> offsets(width), weights(width);
  std::vector<double> ham(n);
  double worst = 0.0;
  for (std::size_t k = 1; k < last; ++k) {
    const std::size_t start = stencil_start(k);
    for (std::size_t m = 0; m < width; ++m) offsets[m] = static_cast<double>(start + m) - static_cast<double>(k);
    first_derivative_weights(offsets, weights);
    problem.model.hamiltonians(trajectory.at(k), ham);
    for (std::size_t i = 0; i < n; ++i) {
      double dv = 0.0;
      for (std::size_t m = 0; m < width; ++m) dv += weights[m] * trajectory.value(start + m, i);
      dv /= h;
      worst = std::max(worst, std::abs(dv - problem.discount * trajectory.value(k, i) + ham[i]));
    }
  }
  return worst;
}

ComparisonReport verify_comparison(const Problem& problem, std::span<const double> g_low,
                                   std::span<const double> g_high, Tolerances tolerances) {
  const std::size_t n = problem.model.node_count();
  if (g_low.size() != n || g_high.size() != n) throw Error(ErrorCode::InvalidArgument, "terminal data size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g_low[i] <= g_high[i])) throw Error(ErrorCode::InvalidArgument, "g_low must be <= g_high coordinatewise");
  }
  const auto low = solve_finite_horizon(problem.with_terminal_payoff({g_low.begin(), g_low.end()}), tolerances);
  const auto high = solve_finite_horizon(problem.with_terminal_payoff({g_high.begin(), g_high.end()}), tolerances);

  ComparisonReport report;
  for (std::size_t k = 0; k < low.values.size(); ++k) {
    report.max_violation = std::max(report.max_violation, low.values[k] - high.values[k]);
  }
  report.passed = report.max_violation <= 1e-8;
  return report;
}

}  // namespace hjg
