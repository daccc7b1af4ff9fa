#include "hjgraph/graph.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

std::string describe(const Edge& e, std::size_t position) {
  return "edge #" + std::to_string(position) + " (" + std::to_string(e.from) + " -> " +
         std::to_string(e.to) + ")";
}

// Breadth-first reachability from node 0 over the given adjacency.
std::size_t reach_count(const std::vector<std::vector<NodeIndex>>& adjacency) {
  std::vector<char> seen(adjacency.size(), 0);
  std::vector<NodeIndex> frontier{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const NodeIndex node = frontier.back();
    frontier.pop_back();
    for (NodeIndex next : adjacency[node]) {
      if (!seen[next]) {
        seen[next] = 1;
        ++count;
        frontier.push_back(next);
      }
    }
  }
  return count;
}

}  // namespace

std::optional<EdgeIndex> Graph::find_edge(NodeIndex from, NodeIndex to) const noexcept {
  if (from >= node_count()) return std::nullopt;
  const auto targets = out_neighbors(from);
  const auto it = std::find(targets.begin(), targets.end(), to);
  if (it == targets.end()) return std::nullopt;
  return first_edge(from) + static_cast<std::size_t>(it - targets.begin());
}

bool is_strongly_connected(std::size_t n_nodes, std::span<const Edge> edges) {
  if (n_nodes == 0) return false;
  std::vector<std::vector<NodeIndex>> forward(n_nodes), backward(n_nodes);
  for (const Edge& e : edges) {
    if (e.from >= n_nodes || e.to >= n_nodes) return false;
    forward[e.from].push_back(e.to);
    backward[e.to].push_back(e.from);
  }
  // Strongly connected iff node 0 reaches everything in G and in reverse(G).
  return reach_count(forward) == n_nodes && reach_count(backward) == n_nodes;
}

Graph build_graph(std::size_t n_nodes, std::span<const Edge> edges) {
  if (n_nodes < 2) {
    throw Error(ErrorCode::InvalidArgument, "a graph needs at least 2 nodes, got " + std::to_string(n_nodes));
  }

  std::vector<std::pair<Edge, std::size_t>> sorted;
  sorted.reserve(edges.size());
  std::vector<char> touched(n_nodes, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.from >= n_nodes || e.to >= n_nodes) {
      throw Error(ErrorCode::InvalidArgument, describe(e, k) + " references a node outside [0, " +
                                                  std::to_string(n_nodes) + ")");
    }
    if (e.from == e.to) throw Error(ErrorCode::SelfLoop, describe(e, k) + " is a self-loop");
    touched[e.from] = touched[e.to] = 1;
    sorted.emplace_back(e, k);
  }

  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first.from < b.first.from; });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const Edge& e = sorted[k].first;
    for (std::size_t m = k; m-- > 0 && sorted[m].first.from == e.from;) {
      if (sorted[m].first.to == e.to) {
        throw Error(ErrorCode::DuplicateEdge, describe(e, sorted[k].second) + " duplicates " +
                                                  describe(sorted[m].first, sorted[m].second));
      }
    }
  }

  for (NodeIndex i = 0; i < n_nodes; ++i) {
    if (!touched[i]) throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(i) + " has no incident edge");
  }
  if (!is_strongly_connected(n_nodes, edges)) {
    throw Error(ErrorCode::NotStronglyConnected, "some node cannot reach every other node");
  }

  Graph g;
  g.offsets_.assign(n_nodes + 1, 0);
  g.targets_.reserve(sorted.size());
  g.sources_.reserve(sorted.size());
  g.input_to_canonical_.resize(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& [e, position] = sorted[k];
    ++g.offsets_[e.from + 1];
    g.targets_.push_back(e.to);
    g.sources_.push_back(e.from);
    g.input_to_canonical_[position] = k;
  }
  for (NodeIndex i = 0; i < n_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

}  // namespace hjg
