#include "hjgraph/random_instance.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "hjgraph/error.hpp"

namespace hjg {

Problem random_problem(const RandomInstanceSpec& spec, std::uint64_t seed) {
  if (spec.nodes < 2) throw Error(ErrorCode::InvalidArgument, "random instances need at least 2 nodes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<NodeIndex> order(spec.nodes);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Edge> edges;
  for (std::size_t k = 0; k < spec.nodes; ++k) edges.push_back({order[k], order[(k + 1) % spec.nodes]});
  for (NodeIndex i = 0; i < spec.nodes; ++i) {
    for (NodeIndex j = 0; j < spec.nodes; ++j) {
      if (i == j || std::find(edges.begin(), edges.end(), Edge{i, j}) != edges.end()) continue;
      if (unit(rng) < spec.extra_edge_probability) edges.push_back({i, j});
    }
  }
  Graph graph = build_graph(spec.nodes, edges);

  std::vector<EdgeCost> costs(graph.edge_count());
  for (auto& c : costs) {
    switch (spec.families) {
      case FamilyMix::Entropic: c.family = CostFamily::Entropic; break;
      case FamilyMix::Quadratic: c.family = CostFamily::Quadratic; break;
      case FamilyMix::Mixed: c.family = unit(rng) < 0.5 ? CostFamily::Entropic : CostFamily::Quadratic; break;
    }
    c.scale = spec.scale_min + (spec.scale_max - spec.scale_min) * unit(rng);
    c.shift = spec.shift_abs * (2.0 * unit(rng) - 1.0);
  }

  std::vector<double> g(spec.nodes);
  for (double& x : g) x = spec.payoff_abs * (2.0 * unit(rng) - 1.0);

  Problem problem{CostModel(std::move(graph), std::move(costs)), std::move(g), spec.horizon, spec.discount};
  problem.validate();
  return problem;
}

}  // namespace hjg
