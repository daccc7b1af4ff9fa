#include "hjgraph/cost_model.hpp"

#include <cmath>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

double EdgeCost::cost(double lambda) const {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeIntensity, "intensity " + std::to_string(lambda) + " < 0");
  switch (family) {
    case CostFamily::Entropic:
      if (lambda == 0.0) return 0.0;
      return lambda * (std::log(lambda / scale) - 1.0) - shift * lambda;
    case CostFamily::Quadratic:
      return lambda * lambda / (2.0 * scale) - shift * lambda;
  }
  return 0.0;
}

double EdgeCost::conjugate(double p) const noexcept {
  switch (family) {
    case CostFamily::Entropic:
      return scale * std::exp(p + shift);
    case CostFamily::Quadratic: {
      const double x = p + shift;
      return x > 0.0 ? 0.5 * scale * x * x : 0.0;
    }
  }
  return 0.0;
}

double EdgeCost::maximizer(double p) const noexcept {
  switch (family) {
    case CostFamily::Entropic:
      return scale * std::exp(p + shift);
    case CostFamily::Quadratic: {
      const double x = p + shift;
      return x > 0.0 ? scale * x : 0.0;
    }
  }
  return 0.0;
}

double EdgeCost::lower_bound() const noexcept { return -conjugate(0.0); }

CostModel::CostModel(Graph graph, std::vector<EdgeCost> costs) : graph_(std::move(graph)), costs_(std::move(costs)) {
  if (costs_.size() != graph_.edge_count()) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(graph_.edge_count()) +
                                                " edge costs, got " + std::to_string(costs_.size()));
  }
  for (EdgeIndex e = 0; e < costs_.size(); ++e) {
    const EdgeCost& c = costs_[e];
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) {
      throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(e) + ": scale must be positive and finite");
    }
    if (!std::isfinite(c.shift)) {
      throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(e) + ": shift must be finite");
    }
    if (c.family != CostFamily::Entropic) strict_monotone_ = false;
  }
}

void CostModel::check_node_vector(NodeIndex i, std::size_t size, const char* what) const {
  if (i >= node_count()) throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(i) + " out of range");
  if (size != graph_.out_degree(i)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " for node " + std::to_string(i) + " has " +
                                                std::to_string(size) + " entries, expected " +
                                                std::to_string(graph_.out_degree(i)));
  }
}

double CostModel::cost(NodeIndex i, std::span<const double> lambdas) const {
  check_node_vector(i, lambdas.size(), "intensity vector");
  const EdgeIndex base = graph_.first_edge(i);
  double total = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) total += costs_[base + k].cost(lambdas[k]);
  return total;
}

double CostModel::hamiltonian(NodeIndex i, std::span<const double> p) const {
  check_node_vector(i, p.size(), "p-vector");
  const EdgeIndex base = graph_.first_edge(i);
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k])) throw Error(ErrorCode::InvalidArgument, "p-vector entries must be finite");
    total += costs_[base + k].conjugate(p[k]);
  }
  if (!std::isfinite(total)) throw Error(ErrorCode::NumericOverflow, "H(" + std::to_string(i) + ", p) overflows");
  return total;
}

std::vector<double> CostModel::optimal_intensities(NodeIndex i, std::span<const double> p) const {
  check_node_vector(i, p.size(), "p-vector");
  const EdgeIndex base = graph_.first_edge(i);
  std::vector<double> lambdas(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k])) throw Error(ErrorCode::InvalidArgument, "p-vector entries must be finite");
    lambdas[k] = costs_[base + k].maximizer(p[k]);
    if (!std::isfinite(lambdas[k])) {
      throw Error(ErrorCode::NumericOverflow, "optimal intensity at node " + std::to_string(i) + " overflows");
    }
  }
  return lambdas;
}

double CostModel::cost_lower_bound(NodeIndex i) const {
  if (i >= node_count()) throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(i) + " out of range");
  double total = 0.0;
  for (EdgeIndex e = graph_.first_edge(i); e < graph_.first_edge(i + 1); ++e) total += costs_[e].lower_bound();
  return total;
}

bool CostModel::try_hamiltonians(std::span<const double> values, std::span<double> out) const noexcept {
  const std::size_t n = node_count();
  for (NodeIndex i = 0; i < n; ++i) {
    double total = 0.0;
    const double vi = values[i];
    for (EdgeIndex e = graph_.first_edge(i); e < graph_.first_edge(i + 1); ++e) {
      total += costs_[e].conjugate(values[graph_.edge(e).to] - vi);
    }
    if (!std::isfinite(total)) return false;
    out[i] = total;
  }
  return true;
}

void CostModel::hamiltonians(std::span<const double> values, std::span<double> out) const {
  if (values.size() != node_count() || out.size() != node_count()) {
    throw Error(ErrorCode::InvalidArgument, "value vector size does not match node count");
  }
  if (!try_hamiltonians(values, out)) throw Error(ErrorCode::NumericOverflow, "Hamiltonian overflow");
}

void CostModel::intensities(std::span<const double> values, std::span<double> out) const {
  if (values.size() != node_count() || out.size() != edge_count()) {
    throw Error(ErrorCode::InvalidArgument, "intensities: size mismatch");
  }
  for (EdgeIndex e = 0; e < edge_count(); ++e) {
    const Edge edge = graph_.edge(e);
    out[e] = costs_[e].maximizer(values[edge.to] - values[edge.from]);
    if (!std::isfinite(out[e])) throw Error(ErrorCode::NumericOverflow, "optimal intensity overflow");
  }
}

void CostModel::running_costs(std::span<const double> edge_intensities, std::span<double> out) const {
  if (edge_intensities.size() != edge_count() || out.size() != node_count()) {
    throw Error(ErrorCode::InvalidArgument, "running_costs: size mismatch");
  }
  for (NodeIndex i = 0; i < node_count(); ++i) {
    double total = 0.0;
    for (EdgeIndex e = graph_.first_edge(i); e < graph_.first_edge(i + 1); ++e) total += costs_[e].cost(edge_intensities[e]);
    out[i] = total;
  }
}

}  // namespace hjg
