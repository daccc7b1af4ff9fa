#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace hjg::test {

CostModel make_model(std::size_t nodes, const std::vector<EdgeDef>& edges) {
  std::vector<Edge> list;
  for (const auto& e : edges) list.push_back({e.from, e.to});
  Graph graph = build_graph(nodes, list);
  std::vector<EdgeCost> costs(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) costs[graph.canonical_index(k)] = edges[k].cost;
  return CostModel(std::move(graph), std::move(costs));
}

CostModel two_node(CostFamily family, double a1, double a2, double b) {
  return make_model(2, {{0, 1, {family, a1, b}}, {1, 0, {family, a2, b}}});
}

CostModel ring(std::size_t nodes, EdgeCost cost) {
  std::vector<EdgeDef> edges;
  for (std::size_t i = 0; i < nodes; ++i) edges.push_back({i, (i + 1) % nodes, cost});
  return make_model(nodes, edges);
}

Problem make_problem(CostModel model, std::vector<double> g, double horizon, double discount) {
  Problem p{std::move(model), std::move(g), horizon, discount};
  p.validate();
  return p;
}

Problem random_instance(std::uint64_t seed, FamilyMix families, std::size_t nodes) {
  RandomInstanceSpec spec;
  spec.nodes = nodes;
  spec.families = families;
  return random_problem(spec, seed);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace hjg::test
