#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hjgraph/cost_model.hpp"
#include "hjgraph/finite_horizon.hpp"
#include "hjgraph/runge_kutta.hpp"

namespace hjg {

/// v_i(s) = U_i(s) - gamma s, where U(s) = V(T - s) is the time-reversed
/// undiscounted value function.
struct DedriftedSeries {
  std::size_t node_count = 0;
  std::vector<double> times;
  std::vector<double> values;  // row-major, times.size() x node_count

  std::span<const double> at(std::size_t k) const noexcept { return {values.data() + k * node_count, node_count}; }
};

DedriftedSeries dedrift(const ValueTrajectory& trajectory, double gamma);

struct QSeries {
  std::vector<double> times;
  std::vector<double> q;  // q(s_k) = max_i (v_i(s_k) - xi_i)
  std::optional<double> q_infinity;
  bool converged = false;
  double max_increase = 0.0;  // max_k q(s_{k+1}) - q(s_k), clamped at 0
};

/// Computes q along the series. q must be nonincreasing: an increase above
/// 1e-9 between consecutive points throws MonotonicityViolation. q_infinity is
/// set (and converged true) when |q(s_M) - q(s_M/2)| < 1e-6.
QSeries q_diagnostic(const DedriftedSeries& series, std::span<const double> xi);

/// S(t) y: the solution at time t of dy_i/dt = H(i, (y_j - y_i)_j) - gamma, y(0) = y.
std::vector<double> semigroup_apply(const CostModel& model, double gamma, std::span<const double> y, double t,
                                    Tolerances tolerances = {1e-12, 1e-12});

struct StrongMaxReport {
  double min_gap = 0.0;  // min_i (S(t) y_high - S(t) y_low)_i
  NodeIndex argmin = 0;
};

/// For a strictly monotone model and y_low <= y_high with y_low != y_high,
/// checks that S(t) y_low < S(t) y_high at every node for t > 0.
/// Throws PreconditionUnmet (non-strict model, unordered or identical data)
/// or StrictnessViolation.
StrongMaxReport check_strong_max_principle(const CostModel& model, double gamma, std::span<const double> y_low,
                                           std::span<const double> y_high, double t,
                                           Tolerances tolerances = {1e-12, 1e-12});

}  // namespace hjg
