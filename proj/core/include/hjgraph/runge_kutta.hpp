#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hjg {

struct Tolerances {
  double rtol = 1e-8;
  double atol = 1e-10;
};

struct IntegrationStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  /// Sum over accepted steps of the sup-norm of the embedded local error
  /// estimate; a crude bound on the global error.
  double error_estimate = 0.0;
};

/// Right-hand side dy/dt = f(t, y). Returns false when f is not finite at
/// (t, y); the integrator treats that as a rejected trial step.
using OdeRhs = std::function<bool(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand-Prince 5(4) explicit Runge-Kutta pair with PI step-size control.
///
/// The state is advanced with the fifth-order solution (local extrapolation).
/// Consecutive calls to advance() reuse the last proposed step size.
class DormandPrince {
 public:
  /// time_scale sets the step-underflow threshold (1e-14 * time_scale).
  DormandPrince(OdeRhs rhs, std::size_t dimension, Tolerances tolerances, double time_scale);

  /// Integrates y in place from t to t_end (> t), landing exactly on t_end.
  /// Throws StepSizeUnderflow, or NumericOverflow if f fails at the start.
  void advance(double& t, std::vector<double>& y, double t_end);

  /// f(t, y) at the state left by the last advance().
  std::span<const double> derivative() const noexcept { return k_[0]; }
  const IntegrationStats& stats() const noexcept { return stats_; }

  /// Caps every step; 0 means uncapped.
  void set_max_step(double h) noexcept { max_step_ = h; }

 private:
  bool eval(double t, std::span<const double> y, std::vector<double>& out);
  double initial_step(double t, const std::vector<double>& y, double direction_span);
  double error_norm(const std::vector<double>& y, const std::vector<double>& y_new) const;

  OdeRhs rhs_;
  std::size_t dim_;
  Tolerances tol_;
  double min_step_;
  double max_step_ = 0.0;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  bool have_derivative_ = false;
  double derivative_time_ = 0.0;
  std::vector<std::vector<double>> k_;
  std::vector<double> stage_, y_new_, err_;
  IntegrationStats stats_;
};

/// Integrates over [0, length] and records the state at `intervals + 1`
/// uniformly spaced points (the integrator lands on each of them).
struct UniformSolution {
  std::size_t dimension = 0;
  std::vector<double> times;
  std::vector<double> states;  // row-major, times.size() x dimension
  IntegrationStats stats;

  std::span<const double> state(std::size_t k) const noexcept { return {states.data() + k * dimension, dimension}; }
};

UniformSolution integrate_uniform(const OdeRhs& rhs, std::span<const double> y0, double length,
                                  std::size_t intervals, Tolerances tolerances);

}  // namespace hjg
