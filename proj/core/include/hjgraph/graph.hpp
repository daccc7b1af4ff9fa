#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hjg {

/// Node indices are zero-based inside the library; file formats use one-based.
using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  NodeIndex from;
  NodeIndex to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite directed graph with certified strong connectivity.
///
/// Edges are stored grouped by source node (stable with respect to the
/// order they were supplied in), so the out-edges of node i occupy the
/// contiguous canonical range [first_edge(i), first_edge(i) + out_degree(i)).
/// Every per-edge table in the library (costs, intensities) uses this order.
class Graph {
 public:
  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const NodeIndex> out_neighbors(NodeIndex i) const noexcept {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t out_degree(NodeIndex i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  EdgeIndex first_edge(NodeIndex i) const noexcept { return offsets_[i]; }

  Edge edge(EdgeIndex e) const noexcept { return {sources_[e], targets_[e]}; }
  std::optional<EdgeIndex> find_edge(NodeIndex from, NodeIndex to) const noexcept;

  /// Canonical index of the k-th edge in the list passed to build_graph.
  EdgeIndex canonical_index(std::size_t input_position) const { return input_to_canonical_.at(input_position); }

  friend Graph build_graph(std::size_t n_nodes, std::span<const Edge> edges);

 private:
  Graph() = default;

  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> targets_;
  std::vector<NodeIndex> sources_;
  std::vector<EdgeIndex> input_to_canonical_;
};

/// Validates and builds a graph. Throws hjg::Error with SelfLoop, DuplicateEdge,
/// IsolatedNode (no incident edge at all), NotStronglyConnected, or
/// InvalidArgument (fewer than two nodes, out-of-range endpoint).
Graph build_graph(std::size_t n_nodes, std::span<const Edge> edges);

/// True iff every node reaches every other node along directed edges.
bool is_strongly_connected(std::size_t n_nodes, std::span<const Edge> edges);

}  // namespace hjg
