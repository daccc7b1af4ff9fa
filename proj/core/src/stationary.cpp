#include "hjgraph/stationary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hjgraph/error.hpp"
#include "hjgraph/runge_kutta.hpp"

namespace hjg {

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// F_i(u) = -r u_i + H(i, du). Returns false on overflow.
bool bellman_map(const CostModel& model, double r, std::span<const double> u, std::span<double> out) {
  if (!model.try_hamiltonians(u, out)) return false;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] -= r * u[i];
  return true;
}

double acceptance_threshold(std::span<const double> u) { return 1e-10 * (1.0 + sup_norm(u)); }

struct NewtonOutcome {
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

NewtonOutcome damped_newton(const CostModel& model, double r, std::vector<double>& u, std::size_t max_iterations) {
  const std::size_t n = u.size();
  const Graph& graph = model.graph();
  std::vector<double> f(n), trial(n), f_trial(n), lambdas(model.edge_count());
  NewtonOutcome outcome;
  if (!bellman_map(model, r, u, f)) return outcome;
  double norm = sup_norm(f);

  Eigen::MatrixXd jacobian(n, n);
  Eigen::VectorXd rhs(n);
  for (; outcome.iterations < max_iterations; ++outcome.iterations) {
    // No residual-based early exit: for small r the constant mode has Jacobian
    // eigenvalue -r, so a tiny residual can still hide an O(residual / r) error in u.
    if (norm == 0.0) break;

    model.intensities(u, lambdas);
    jacobian.setZero();
    for (NodeIndex i = 0; i < n; ++i) {
      jacobian(i, i) = -r;
      for (EdgeIndex e = graph.first_edge(i); e < graph.first_edge(i + 1); ++e) {
        jacobian(i, i) -= lambdas[e];
        jacobian(i, graph.edge(e).to) += lambdas[e];
      }
      rhs(i) = -f[i];
    }
    const Eigen::VectorXd step = jacobian.partialPivLu().solve(rhs);
    if (!step.allFinite()) break;
    if (step.lpNorm<Eigen::Infinity>() <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + sup_norm(u))) break;

    double alpha = 1.0;
    bool improved = false;
    while (alpha > 1e-10) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + alpha * step(i);
      if (bellman_map(model, r, trial, f_trial)) {
        const double trial_norm = sup_norm(f_trial);
        if (trial_norm < norm) {
          u.swap(trial);
          f.swap(f_trial);
          norm = trial_norm;
          improved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!improved) break;  // stagnated (typically at round-off level)
  }
  outcome.residual = norm;
  return outcome;
}

// Integrates dV/ds = F(V) until the derivative is below 1e-10 in sup-norm.
bool relax_by_integration(const CostModel& model, double r, std::vector<double>& u, std::size_t max_steps) {
  OdeRhs rhs = [&model, r](double, std::span<const double> y, std::span<double> dy) {
    return bellman_map(model, r, y, dy);
  };
  const double chunk = std::max(1.0, 1.0 / r);
  DormandPrince stepper(rhs, u.size(), Tolerances{1e-10, 1e-12}, chunk);
  double s = 0.0;
  while (stepper.stats().accepted_steps + stepper.stats().rejected_steps < max_steps) {
    stepper.advance(s, u, s + chunk);
    if (sup_norm(stepper.derivative()) < 1e-10) return true;
  }
  return false;
}

}  // namespace

double stationary_residual(const CostModel& model, double r, std::span<const double> u) {
  std::vector<double> f(u.size());
  if (!bellman_map(model, r, u, f)) return std::numeric_limits<double>::infinity();
  return sup_norm(f);
}

StationaryValue solve_stationary(const CostModel& model, double r, const StationaryOptions& options) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "discount must be positive");
  const std::size_t n = model.node_count();

  StationaryValue out;
  out.discount = r;
  out.u = options.initial_guess.value_or(std::vector<double>(n, 0.0));
  if (out.u.size() != n) throw Error(ErrorCode::InvalidArgument, "initial guess size mismatch");

  std::vector<double> start = out.u;
  NewtonOutcome newton = damped_newton(model, r, out.u, options.max_newton_iterations);
  out.iterations = newton.iterations;
  if (newton.residual <= acceptance_threshold(out.u)) {
    out.residual = newton.residual;
    return out;
  }

  // Newton stagnated: relax along the time-dependent flow, then polish.
  out.used_fallback = true;
  std::vector<double> relaxed = std::isfinite(newton.residual) ? out.u : start;
  try {
    relax_by_integration(model, r, relaxed, options.max_fallback_steps);
  } catch (const Error&) {
    throw Error(ErrorCode::NoConvergence, "stationary solve at r=" + std::to_string(r) + ": fallback integration failed");
  }
  out.u = relaxed;
  newton = damped_newton(model, r, out.u, options.max_newton_iterations);
  out.iterations += newton.iterations;
  out.residual = stationary_residual(model, r, out.u);
  if (!(out.residual <= acceptance_threshold(out.u))) {
    throw Error(ErrorCode::NoConvergence, "stationary solve at r=" + std::to_string(r) +
                                              " stalled with residual " + std::to_string(out.residual));
  }
  return out;
}

StationaryComparisonReport verify_stationary_comparison(const CostModel& model, double eps, std::span<const double> v,
                                                        std::span<const double> w) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const std::size_t n = model.node_count();
  if (v.size() != n || w.size() != n) throw Error(ErrorCode::InvalidArgument, "vector size mismatch");

  std::vector<double> fv(n), fw(n);
  model.hamiltonians(v, fv);
  model.hamiltonians(w, fw);
  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = -eps * v[i] + fv[i];
    const double rhs = -eps * w[i] + fw[i];
    const double slack = 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
    if (lhs < rhs - slack) {
      throw Error(ErrorCode::HypothesisUnmet, "node " + std::to_string(i) + ": -eps v + H(dv) = " +
                                                  std::to_string(lhs) + " < -eps w + H(dw) = " + std::to_string(rhs));
    }
  }

  StationaryComparisonReport report;
  report.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) report.margin = std::min(report.margin, w[i] - v[i]);
  report.passed = report.margin >= -1e-9 * (1.0 + sup_norm(w));
  return report;
}

}  // namespace hjg
