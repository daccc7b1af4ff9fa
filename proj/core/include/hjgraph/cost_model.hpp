#pragma once

#include <span>
#include <vector>

#include "hjgraph/graph.hpp"

namespace hjg {

enum class CostFamily { Entropic, Quadratic };

/// Cost paid per unit time for running one edge at intensity lambda >= 0.
///
///   Entropic:  l(lambda) = lambda (ln(lambda / scale) - 1) - shift * lambda, l(0) = 0
///   Quadratic: l(lambda) = lambda^2 / (2 scale) - shift * lambda
///
/// Both have closed-form conjugates over lambda >= 0:
///   Entropic:  h(p) = scale * exp(p + shift),     argmax = scale * exp(p + shift)
///   Quadratic: h(p) = scale * ((p + shift)^+)^2/2, argmax = scale * (p + shift)^+
struct EdgeCost {
  CostFamily family = CostFamily::Entropic;
  double scale = 1.0;
  double shift = 0.0;

  double cost(double lambda) const;
  /// sup over lambda >= 0 of lambda * p - l(lambda). May be +inf on overflow.
  double conjugate(double p) const noexcept;
  double maximizer(double p) const noexcept;
  /// min over lambda >= 0 of l(lambda); equals -conjugate(0).
  double lower_bound() const noexcept;
  /// d/dp of the conjugate; coincides with maximizer(p).
  double conjugate_slope(double p) const noexcept { return maximizer(p); }

  friend bool operator==(const EdgeCost&, const EdgeCost&) = default;
};

/// Per-edge costs over a graph. Immutable; every method is a pure function.
///
/// L(i, lambda) = sum_j l_ij(lambda_j) and H(i, p) = sum_j h_ij(p_j), with
/// lambda and p indexed like Graph::out_neighbors(i).
class CostModel {
 public:
  /// costs are indexed by canonical edge index (see Graph).
  CostModel(Graph graph, std::vector<EdgeCost> costs);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t node_count() const noexcept { return graph_.node_count(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  const EdgeCost& edge_cost(EdgeIndex e) const { return costs_.at(e); }
  std::span<const EdgeCost> edge_costs() const noexcept { return costs_; }

  /// True iff every edge is entropic, which makes H(i, .) strictly increasing
  /// in every coordinate.
  bool strict_monotone() const noexcept { return strict_monotone_; }

  /// L(i, lambdas). Throws NegativeIntensity for lambda < 0.
  double cost(NodeIndex i, std::span<const double> lambdas) const;
  /// H(i, p). Throws NumericOverflow when the value is not representable.
  double hamiltonian(NodeIndex i, std::span<const double> p) const;
  /// The intensities attaining H(i, p).
  std::vector<double> optimal_intensities(NodeIndex i, std::span<const double> p) const;
  /// Analytic lower bound of L(i, .) over the non-negative orthant.
  double cost_lower_bound(NodeIndex i) const;

  /// out[i] = H(i, (values_j - values_i)_j) for every node. Returns false
  /// (leaving out partially written) if any entry is not finite.
  bool try_hamiltonians(std::span<const double> values, std::span<double> out) const noexcept;
  /// Throwing variant of try_hamiltonians.
  void hamiltonians(std::span<const double> values, std::span<double> out) const;
  /// out[e] = optimal intensity on canonical edge e given node values.
  void intensities(std::span<const double> values, std::span<double> out) const;
  /// Running cost L(i, .) at every node for a per-edge intensity table.
  void running_costs(std::span<const double> edge_intensities, std::span<double> out) const;

 private:
  void check_node_vector(NodeIndex i, std::size_t size, const char* what) const;

  Graph graph_;
  std::vector<EdgeCost> costs_;
  bool strict_monotone_ = true;
};

}  // namespace hjg
