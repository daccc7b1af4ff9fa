#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hjgraph/cost_model.hpp"
#include "hjgraph/runge_kutta.hpp"

namespace hjg {

enum class ErgodicMethod { VanishingDiscount, DirectLongTime };

struct ErgodicDiagnostic {
  double parameter;  // discount r, or time t
  double value;      // max_i |r u^r_i - gamma|, or q(t)
};

/// Ergodic constant gamma and corrector xi solving -gamma + H(i, (xi_j - xi_i)_j) = 0,
/// normalized so that xi[0] == 0.
struct ErgodicSolution {
  double gamma = 0.0;
  std::vector<double> xi;
  std::optional<double> q_infinity;
  ErgodicMethod method = ErgodicMethod::VanishingDiscount;
  std::vector<ErgodicDiagnostic> diagnostics;
  /// max_i |-gamma + H(i, dxi)|.
  double residual = 0.0;
  /// True when the model is not strictly monotone: xi need not be unique up to constants.
  bool non_unique_corrector = false;
  /// True when (gamma, xi) were polished by Newton on the ergodic equation.
  bool refined = false;
};

/// r_n = 2^-n for n = 3..20.
std::vector<double> default_discount_sequence();

double ergodic_residual(const CostModel& model, double gamma, std::span<const double> xi);

struct VanishingDiscountOptions {
  std::vector<double> discounts = default_discount_sequence();
  /// Newton starting point at the first discount; zeros when absent.
  std::optional<std::vector<double>> initial_guess;
  /// Polish the limit with Newton on the ergodic equation itself.
  bool refine = true;
};

/// Solves the discounted problem along a decreasing sequence of discounts
/// (each warm-started from the previous solution) and reads off
/// gamma = r mean_i(u^r_i) and xi_i = u^r_i - u^r_0 at the last discount.
/// Convergence is judged on the first-order extrapolation of r u^r between
/// the last two discounts. Throws NoConvergence.
ErgodicSolution solve_ergodic_vanishing_discount(const CostModel& model, const VanishingDiscountOptions& options = {});

struct DirectOptions {
  double t_max = 200.0;
  /// U(0); zeros when absent. Only q_infinity depends on it.
  std::optional<std::vector<double>> initial_data;
  Tolerances tolerances{1e-12, 1e-12};
};

/// Integrates dU/dt = H(i, (U_j - U_i)_j) to t_max and takes gamma from the
/// drift of U_0 over [t_max/2, t_max], xi from U(t_max) - U_0(t_max).
/// Throws NoConvergence if the drift over [t_max/4, t_max/2] differs by more
/// than 1e-6.
ErgodicSolution solve_ergodic_direct(const CostModel& model, const DirectOptions& options = {});

struct ErgodicRefinement {
  double gamma = 0.0;
  std::vector<double> xi;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Damped Newton on (gamma, xi_1..xi_{N-1}) with xi_0 = 0, from the given start.
/// Where the Jacobian is singular (some optimal intensities vanish) the
/// minimum-norm least-squares step is used. Returns nullopt when the residual
/// does not reach 1e-11 (1 + |gamma| + max|xi|).
std::optional<ErgodicRefinement> refine_ergodic(const CostModel& model, double gamma, std::span<const double> xi,
                                                std::size_t max_iterations = 100);

}  // namespace hjg
