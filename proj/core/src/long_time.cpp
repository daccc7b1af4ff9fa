#include "hjgraph/long_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

DedriftedSeries dedrift(const ValueTrajectory& trajectory, double gamma) {
  if (!std::isfinite(gamma)) throw Error(ErrorCode::InvalidArgument, "gamma must be finite");
  if (trajectory.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  const std::size_t n = trajectory.node_count;
  const std::size_t last = trajectory.size() - 1;
  const double horizon = trajectory.grid.back();

  DedriftedSeries out;
  out.node_count = n;
  out.times.resize(trajectory.size());
  out.values.resize(trajectory.values.size());
  for (std::size_t k = 0; k <= last; ++k) {
    const double s = horizon - trajectory.grid[last - k];
    out.times[k] = s;
    const auto v = trajectory.at(last - k);
    for (std::size_t i = 0; i < n; ++i) out.values[k * n + i] = v[i] - gamma * s;
  }
  return out;
}

QSeries q_diagnostic(const DedriftedSeries& series, std::span<const double> xi) {
  const std::size_t n = series.node_count;
  if (xi.size() != n) throw Error(ErrorCode::InvalidArgument, "corrector size mismatch");
  if (xi[0] != 0.0) throw Error(ErrorCode::InvalidArgument, "corrector must be normalized with xi[0] = 0");
  if (series.times.empty()) throw Error(ErrorCode::InvalidArgument, "empty series");

  QSeries out;
  out.times = series.times;
  out.q.resize(series.times.size());
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const auto v = series.at(k);
    double q = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) q = std::max(q, v[i] - xi[i]);
    out.q[k] = q;
    if (k > 0) {
      const double increase = q - out.q[k - 1];
      out.max_increase = std::max(out.max_increase, increase);
      if (increase > 1e-9) {
        throw Error(ErrorCode::MonotonicityViolation, "q increases by " + std::to_string(increase) + " at t=" +
                                                          std::to_string(series.times[k]));
      }
    }
  }
  const std::size_t last = out.q.size() - 1;
  if (std::abs(out.q[last] - out.q[last / 2]) < 1e-6) {
    out.q_infinity = out.q[last];
    out.converged = true;
  }
  return out;
}

std::vector<double> semigroup_apply(const CostModel& model, double gamma, std::span<const double> y, double t,
                                    Tolerances tolerances) {
  const std::size_t n = model.node_count();
  if (y.size() != n) throw Error(ErrorCode::InvalidArgument, "state size mismatch");
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "state must be finite");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be non-negative");
  std::vector<double> state(y.begin(), y.end());
  if (t == 0.0) return state;

  OdeRhs rhs = [&model, gamma](double, std::span<const double> x, std::span<double> dx) {
    if (!model.try_hamiltonians(x, dx)) return false;
    for (double& d : dx) d -= gamma;
    return true;
  };
  DormandPrince stepper(rhs, n, tolerances, t);
  double s = 0.0;
  stepper.advance(s, state, t);
  return state;
}

StrongMaxReport check_strong_max_principle(const CostModel& model, double gamma, std::span<const double> y_low,
                                           std::span<const double> y_high, double t, Tolerances tolerances) {
  if (!model.strict_monotone()) {
    throw Error(ErrorCode::PreconditionUnmet, "strong maximum principle needs a strictly monotone model");
  }
  const std::size_t n = model.node_count();
  if (y_low.size() != n || y_high.size() != n) throw Error(ErrorCode::InvalidArgument, "state size mismatch");
  bool strict_somewhere = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y_low[i] <= y_high[i])) throw Error(ErrorCode::PreconditionUnmet, "y_low must be <= y_high");
    strict_somewhere = strict_somewhere || y_low[i] < y_high[i];
  }
  if (!strict_somewhere) throw Error(ErrorCode::PreconditionUnmet, "y_low == y_high: no strict inequality");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");

  const auto low = semigroup_apply(model, gamma, y_low, t, tolerances);
  const auto high = semigroup_apply(model, gamma, y_high, t, tolerances);
  StrongMaxReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = high[i] - low[i];
    if (gap < report.min_gap) {
      report.min_gap = gap;
      report.argmin = i;
    }
  }
  if (!(report.min_gap > 0.0)) {
    throw Error(ErrorCode::StrictnessViolation, "node " + std::to_string(report.argmin) + " not strictly ordered (gap " +
                                                    std::to_string(report.min_gap) + ")");
  }
  return report;
}

}  // namespace hjg
