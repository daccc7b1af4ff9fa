#pragma once

#include <hjgraph/hjgraph.hpp>

#include <cstdint>
#include <vector>

namespace hjg::test {

struct EdgeDef {
  NodeIndex from;
  NodeIndex to;
  EdgeCost cost;
};

/// Model from zero-based edges; costs follow the listed order.
CostModel make_model(std::size_t nodes, const std::vector<EdgeDef>& edges);

/// Two nodes, edge 0->1 with scale a1 and edge 1->0 with scale a2.
CostModel two_node(CostFamily family, double a1, double a2, double b = 0.0);
/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with identical costs.
CostModel ring(std::size_t nodes, EdgeCost cost);

Problem make_problem(CostModel model, std::vector<double> g, double horizon = 1.0, double discount = 0.0);

/// random_problem with nodes in 2..6 and the given family mix.
Problem random_instance(std::uint64_t seed, FamilyMix families, std::size_t nodes);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace hjg::test
