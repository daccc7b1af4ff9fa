#pragma once

#include <vector>

#include "hjgraph/cost_model.hpp"

namespace hjg {

/// Finite-horizon control problem: maximize the expected discounted reward
/// -int_0^T e^{-rt} L(X_t, lambda_t) dt + e^{-rT} g(X_T).
struct Problem {
  CostModel model;
  std::vector<double> terminal_payoff;
  double horizon = 1.0;
  double discount = 0.0;

  /// Throws InvalidArgument unless g has one finite entry per node,
  /// horizon > 0 and discount >= 0 (all finite).
  void validate() const;

  std::size_t node_count() const noexcept { return model.node_count(); }

  Problem with_horizon(double T) const;
  Problem with_discount(double r) const;
  Problem with_terminal_payoff(std::vector<double> g) const;
};

}  // namespace hjg
