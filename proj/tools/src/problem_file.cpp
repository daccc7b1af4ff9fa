#include "problem_file.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace hjg::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t k = 0; k < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw InputError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& require(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw InputError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& value, const std::string& what) {
  if (!value.is_number()) throw InputError(what + " must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw InputError(what + " must be finite");
  return x;
}

std::size_t positive_integer(const json& value, const std::string& what) {
  if (!value.is_number_integer() || value.get<long long>() < 1) throw InputError(what + " must be a positive integer");
  return value.get<std::size_t>();
}

std::string edge_label(std::size_t k, const EdgeSpec& e) {
  return "edge #" + std::to_string(k + 1) + " (" + std::to_string(e.from) + " -> " + std::to_string(e.to) + ")";
}

}  // namespace

ProblemFile parse_problem_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::string detail = e.what();
    const auto dash = detail.find(" - ");
    throw InputError("syntax error at " + location(text, e.byte) + ": " +
                     (dash == std::string::npos ? detail : detail.substr(dash + 3)));
  }
  if (!doc.is_object()) throw InputError("problem file must be a JSON object");
  reject_unknown_keys(doc, {"nodes", "edges", "terminal_payoff", "horizon", "discount", "solver"}, "problem file");

  ProblemFile file;
  file.nodes = positive_integer(require(doc, "nodes", "problem file"), "nodes");

  const json& edges = require(doc, "edges", "problem file");
  if (!edges.is_array()) throw InputError("edges must be a list");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edge #" + std::to_string(k + 1);
    const json& e = edges[k];
    if (!e.is_object()) throw InputError(where + " must be an object");
    reject_unknown_keys(e, {"from", "to", "family", "scale", "shift"}, where);
    EdgeSpec spec;
    spec.from = positive_integer(require(e, "from", where), where + " from");
    spec.to = positive_integer(require(e, "to", where), where + " to");
    const json& family = require(e, "family", where);
    if (family == "entropic") {
      spec.family = CostFamily::Entropic;
    } else if (family == "quadratic") {
      spec.family = CostFamily::Quadratic;
    } else {
      throw InputError(where + " family must be \"entropic\" or \"quadratic\"");
    }
    spec.scale = number(require(e, "scale", where), where + " scale");
    spec.shift = number(require(e, "shift", where), where + " shift");
    file.edges.push_back(spec);
  }

  const json& payoff = require(doc, "terminal_payoff", "problem file");
  if (!payoff.is_array()) throw InputError("terminal_payoff must be a list");
  for (std::size_t i = 0; i < payoff.size(); ++i) {
    file.terminal_payoff.push_back(number(payoff[i], "terminal_payoff[" + std::to_string(i + 1) + "]"));
  }
  file.horizon = number(require(doc, "horizon", "problem file"), "horizon");
  if (doc.contains("discount")) file.discount = number(doc["discount"], "discount");

  if (doc.contains("solver")) {
    const json& solver = doc["solver"];
    if (!solver.is_object()) throw InputError("solver must be an object");
    reject_unknown_keys(solver, {"rtol", "atol", "t_max", "r_min"}, "solver");
    const auto positive = [&](const char* key, std::optional<double>& slot) {
      if (!solver.contains(key)) return;
      const double x = number(solver[key], std::string("solver.") + key);
      if (!(x > 0.0)) throw InputError(std::string("solver.") + key + " must be positive");
      slot = x;
    };
    positive("rtol", file.solver.rtol);
    positive("atol", file.solver.atol);
    positive("t_max", file.solver.t_max);
    positive("r_min", file.solver.r_min);
  }
  return file;
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_file(buffer.str());
}

std::string serialize(const ProblemFile& file) {
  ordered_json doc;
  doc["nodes"] = file.nodes;
  doc["edges"] = ordered_json::array();
  for (const auto& e : file.edges) {
    ordered_json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    edge["family"] = e.family == CostFamily::Entropic ? "entropic" : "quadratic";
    edge["scale"] = e.scale;
    edge["shift"] = e.shift;
    doc["edges"].push_back(std::move(edge));
  }
  doc["terminal_payoff"] = file.terminal_payoff;
  doc["horizon"] = file.horizon;
  doc["discount"] = file.discount;
  ordered_json solver = ordered_json::object();
  if (file.solver.rtol) solver["rtol"] = *file.solver.rtol;
  if (file.solver.atol) solver["atol"] = *file.solver.atol;
  if (file.solver.t_max) solver["t_max"] = *file.solver.t_max;
  if (file.solver.r_min) solver["r_min"] = *file.solver.r_min;
  if (!solver.empty()) doc["solver"] = std::move(solver);
  return doc.dump(2) + "\n";
}

Problem to_problem(const ProblemFile& file) {
  if (file.nodes < 2) throw InputError("nodes must be at least 2");
  std::vector<Edge> edges;
  std::vector<EdgeCost> input_costs;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < file.edges.size(); ++k) {
    const EdgeSpec& e = file.edges[k];
    if (e.from > file.nodes || e.to > file.nodes) {
      throw InputError(edge_label(k, e) + ": endpoint outside 1.." + std::to_string(file.nodes));
    }
    if (e.from == e.to) throw InputError(edge_label(k, e) + ": self-loop");
    if (!seen.emplace(e.from, e.to).second) throw InputError(edge_label(k, e) + ": duplicate edge");
    if (!(e.scale > 0.0)) throw InputError(edge_label(k, e) + ": scale must be positive");
    edges.push_back({e.from - 1, e.to - 1});
    input_costs.push_back({e.family, e.scale, e.shift});
  }
  if (file.terminal_payoff.size() != file.nodes) {
    throw InputError("terminal_payoff has " + std::to_string(file.terminal_payoff.size()) + " entries, expected " +
                     std::to_string(file.nodes));
  }
  if (!(file.horizon > 0.0)) throw InputError("horizon must be positive");
  if (!(file.discount >= 0.0)) throw InputError("discount must be non-negative");

  try {
    Graph graph = build_graph(file.nodes, edges);
    std::vector<EdgeCost> costs(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) costs[graph.canonical_index(k)] = input_costs[k];
    Problem problem{CostModel(std::move(graph), std::move(costs)), file.terminal_payoff, file.horizon, file.discount};
    problem.validate();
    return problem;
  } catch (const Error& e) {
    throw InputError(std::string("invalid problem: ") + e.what());
  }
}

ProblemFile from_problem(const Problem& problem) {
  ProblemFile file;
  const Graph& graph = problem.model.graph();
  file.nodes = graph.node_count();
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    const Edge edge = graph.edge(e);
    const EdgeCost& cost = problem.model.edge_cost(e);
    file.edges.push_back({edge.from + 1, edge.to + 1, cost.family, cost.scale, cost.shift});
  }
  file.terminal_payoff = problem.terminal_payoff;
  file.horizon = problem.horizon;
  file.discount = problem.discount;
  return file;
}

Tolerances tolerances(const ProblemFile& file) {
  Tolerances tol;
  if (file.solver.rtol) tol.rtol = *file.solver.rtol;
  if (file.solver.atol) tol.atol = *file.solver.atol;
  return tol;
}

std::vector<double> discount_sequence(const ProblemFile& file) {
  const double r_min = file.solver.r_min.value_or(std::ldexp(1.0, -20));
  std::vector<double> out;
  for (int n = 3; n <= 60 && std::ldexp(1.0, -n) >= r_min; ++n) out.push_back(std::ldexp(1.0, -n));
  if (out.size() < 2) throw InputError("solver.r_min must be at most 2^-4");
  return out;
}

double direct_t_max(const ProblemFile& file) { return file.solver.t_max.value_or(200.0); }

}  // namespace hjg::cli
