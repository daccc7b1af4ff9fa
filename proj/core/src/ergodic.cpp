#include "hjgraph/ergodic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "hjgraph/error.hpp"
#include "hjgraph/stationary.hpp"

namespace hjg {

namespace {

std::string format_small(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3e", x);
  return buffer;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

bool ergodic_map(const CostModel& model, double gamma, std::span<const double> xi, std::span<double> out) {
  if (!model.try_hamiltonians(xi, out)) return false;
  for (double& x : out) x -= gamma;
  return true;
}

}  // namespace

std::vector<double> default_discount_sequence() {
  std::vector<double> r;
  for (int n = 3; n <= 20; ++n) r.push_back(std::ldexp(1.0, -n));
  return r;
}

double ergodic_residual(const CostModel& model, double gamma, std::span<const double> xi) {
  std::vector<double> f(xi.size());
  if (!ergodic_map(model, gamma, xi, f)) return std::numeric_limits<double>::infinity();
  return sup_norm(f);
}

std::optional<ErgodicRefinement> refine_ergodic(const CostModel& model, double gamma, std::span<const double> xi,
                                                std::size_t max_iterations) {
  const std::size_t n = model.node_count();
  if (xi.size() != n) throw Error(ErrorCode::InvalidArgument, "corrector size mismatch");
  const Graph& graph = model.graph();

  ErgodicRefinement out;
  out.gamma = gamma;
  out.xi.assign(xi.begin(), xi.end());
  const double pivot = out.xi[0];
  for (double& x : out.xi) x -= pivot;

  std::vector<double> f(n), f_trial(n), trial(n), lambdas(model.edge_count());
  if (!ergodic_map(model, out.gamma, out.xi, f)) return std::nullopt;
  double norm = sup_norm(f);

  // Unknowns z = (gamma, xi_1, ..., xi_{N-1}).
  Eigen::MatrixXd jacobian(n, n);
  Eigen::VectorXd rhs(n);
  for (; out.iterations < max_iterations; ++out.iterations) {
    if (norm <= 1e-14 * (1.0 + std::abs(out.gamma))) break;
    model.intensities(out.xi, lambdas);
    jacobian.setZero();
    for (NodeIndex i = 0; i < n; ++i) {
      jacobian(i, 0) = -1.0;
      for (EdgeIndex e = graph.first_edge(i); e < graph.first_edge(i + 1); ++e) {
        const NodeIndex j = graph.edge(e).to;
        if (j != 0) jacobian(i, j) += lambdas[e];
        if (i != 0) jacobian(i, i) -= lambdas[e];
      }
      rhs(i) = -f[i];
    }
    // Singular when vanishing intensities leave xi non-unique; the
    // minimum-norm least-squares step still moves onto the solution set.
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(jacobian);
    const Eigen::VectorXd step = lu.isInvertible() ? Eigen::VectorXd(lu.solve(rhs))
                                                   : Eigen::VectorXd(jacobian.completeOrthogonalDecomposition().solve(rhs));
    if (!step.allFinite()) break;

    double alpha = 1.0;
    bool improved = false;
    while (alpha > 1e-10) {
      const double g_trial = out.gamma + alpha * step(0);
      trial[0] = 0.0;
      for (std::size_t i = 1; i < n; ++i) trial[i] = out.xi[i] + alpha * step(i);
      if (ergodic_map(model, g_trial, trial, f_trial)) {
        const double trial_norm = sup_norm(f_trial);
        if (trial_norm < norm) {
          out.gamma = g_trial;
          out.xi.swap(trial);
          f.swap(f_trial);
          norm = trial_norm;
          improved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!improved) break;
  }
  out.residual = norm;
  if (!(norm <= 1e-11 * (1.0 + std::abs(out.gamma) + sup_norm(out.xi)))) return std::nullopt;
  return out;
}

ErgodicSolution solve_ergodic_vanishing_discount(const CostModel& model, const VanishingDiscountOptions& options) {
  const auto& discounts = options.discounts;
  if (discounts.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two discounts");
  for (std::size_t k = 0; k < discounts.size(); ++k) {
    if (!(discounts[k] > 0.0) || (k > 0 && !(discounts[k] < discounts[k - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "discount sequence must be positive and strictly decreasing");
    }
  }
  const std::size_t n = model.node_count();

  std::vector<std::vector<double>> scaled;  // r u^r per discount
  scaled.reserve(discounts.size());
  StationaryOptions stationary;
  stationary.initial_guess = options.initial_guess;
  std::vector<double> u, u_prev;
  for (std::size_t k = 0; k < discounts.size(); ++k) {
    const double r = discounts[k];
    u_prev = std::move(u);
    u = solve_stationary(model, r, stationary).u;
    std::vector<double> ru(n);
    for (std::size_t i = 0; i < n; ++i) ru[i] = r * u[i];
    scaled.push_back(std::move(ru));

    // u^r ~ gamma / r + w: rescale the constant part for the next discount.
    if (k + 1 < discounts.size()) {
      const double m = mean(u);
      const double next = discounts[k + 1];
      std::vector<double> guess(n);
      for (std::size_t i = 0; i < n; ++i) guess[i] = r * m / next + (u[i] - m);
      stationary.initial_guess = std::move(guess);
    }
  }

  ErgodicSolution out;
  out.method = ErgodicMethod::VanishingDiscount;
  out.non_unique_corrector = !model.strict_monotone();
  out.gamma = mean(scaled.back());
  out.xi.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.xi[i] = u[i] - u[0];

  if (options.refine) {
    if (auto refined = refine_ergodic(model, out.gamma, out.xi)) {
      if (std::abs(refined->gamma - out.gamma) <= 1e-3 * (1.0 + std::abs(out.gamma))) {
        out.gamma = refined->gamma;
        out.xi = std::move(refined->xi);
        out.refined = true;
      }
    }
    if (!out.refined) {
      // Newton is unavailable when some optimal intensities vanish; remove the
      // O(r) bias by first-order extrapolation over the last two discounts instead.
      const double r_prev = discounts[discounts.size() - 2], r_cur = discounts.back();
      const auto extrapolate = [&](double now, double before) { return (r_prev * now - r_cur * before) / (r_prev - r_cur); };
      double gamma = 0.0;
      std::vector<double> xi(n);
      for (std::size_t i = 0; i < n; ++i) {
        gamma += extrapolate(scaled.back()[i], scaled[scaled.size() - 2][i]) / static_cast<double>(n);
        xi[i] = extrapolate(u[i] - u[0], u_prev[i] - u_prev[0]);
      }
      if (ergodic_residual(model, gamma, xi) < ergodic_residual(model, out.gamma, out.xi)) {
        out.gamma = gamma;
        out.xi = std::move(xi);
      }
    }
  }

  for (std::size_t k = 0; k < discounts.size(); ++k) {
    double spread = 0.0;
    for (double x : scaled[k]) spread = std::max(spread, std::abs(x - out.gamma));
    out.diagnostics.push_back({discounts[k], spread});
  }

  // r u^r = gamma + r w + O(r^2): the extrapolated estimate removes the O(r) term.
  const auto extrapolated_error = [&](std::size_t k) {
    const double r_prev = discounts[k - 1], r_cur = discounts[k];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ext = (r_prev * scaled[k][i] - r_cur * scaled[k - 1][i]) / (r_prev - r_cur);
      worst = std::max(worst, std::abs(ext - out.gamma));
    }
    return worst;
  };
  const std::size_t last = discounts.size() - 1;
  const double d_last = extrapolated_error(last);
  if (last >= 2) {
    const double d_prev = extrapolated_error(last - 1);
    if (!(d_last < 1e-6 && d_prev < 1e-6 && std::abs(d_last - d_prev) < 1e-7)) {
      throw Error(ErrorCode::NoConvergence, "vanishing-discount estimates not stabilized (" + format_small(d_prev) +
                                                ", " + format_small(d_last) + ")");
    }
  } else if (!(d_last < 1e-6)) {
    throw Error(ErrorCode::NoConvergence, "vanishing-discount estimate not stabilized");
  }

  out.residual = ergodic_residual(model, out.gamma, out.xi);
  return out;
}

ErgodicSolution solve_ergodic_direct(const CostModel& model, const DirectOptions& options) {
  if (!(options.t_max >= 10.0) || !std::isfinite(options.t_max)) {
    throw Error(ErrorCode::InvalidArgument, "t_max must be >= 10");
  }
  const std::size_t n = model.node_count();
  std::vector<double> y0 = options.initial_data.value_or(std::vector<double>(n, 0.0));
  if (y0.size() != n) throw Error(ErrorCode::InvalidArgument, "initial data size mismatch");

  OdeRhs rhs = [&model](double, std::span<const double> y, std::span<double> dy) {
    return model.try_hamiltonians(y, dy);
  };
  const UniformSolution path = integrate_uniform(rhs, y0, options.t_max, 4, options.tolerances);

  const double t = options.t_max;
  const auto u_quarter = path.state(1), u_half = path.state(2), u_end = path.state(4);
  const double drift_early = (u_half[0] - u_quarter[0]) / (t / 4.0);
  const double drift_late = (u_end[0] - u_half[0]) / (t / 2.0);
  if (std::abs(drift_early - drift_late) > 1e-6) {
    throw Error(ErrorCode::NoConvergence, "drift not stabilized: " + std::to_string(drift_early) + " vs " +
                                              std::to_string(drift_late));
  }

  ErgodicSolution out;
  out.method = ErgodicMethod::DirectLongTime;
  out.non_unique_corrector = !model.strict_monotone();
  out.gamma = drift_late;
  out.xi.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.xi[i] = u_end[i] - u_end[0];

  const auto q_at = [&](std::size_t k) {
    const auto state = path.state(k);
    double q = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) q = std::max(q, state[i] - out.gamma * path.times[k] - out.xi[i]);
    return q;
  };
  for (std::size_t k = 1; k <= 4; ++k) out.diagnostics.push_back({path.times[k], q_at(k)});
  const double q_end = q_at(4);
  if (std::abs(q_end - q_at(2)) < 1e-6) out.q_infinity = q_end;

  out.residual = ergodic_residual(model, out.gamma, out.xi);
  return out;
}

}  // namespace hjg
