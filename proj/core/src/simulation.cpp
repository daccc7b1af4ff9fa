#include "hjgraph/simulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** seeded from (seed, path) through splitmix64.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) noexcept {
    std::uint64_t x = splitmix64(seed) ^ splitmix64(path + 0x632be59bd9b4e019ULL);
    for (auto& s : state_) s = x = splitmix64(x);
  }

  // Uniform on (0, 1].
  double uniform() noexcept { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  std::uint64_t state_[4];
};

void check_policy(const Problem& problem, const Policy& policy) {
  if (policy.edge_count() != problem.model.edge_count()) {
    throw Error(ErrorCode::PolicyGridMismatch, "policy has " + std::to_string(policy.edge_count()) +
                                                   " intensity columns, problem has " +
                                                   std::to_string(problem.model.edge_count()) + " edges");
  }
  if (!policy.is_stationary()) {
    const auto grid = policy.grid();
    const double T = problem.horizon;
    if (std::abs(grid.front()) > 1e-12 * T || grid.back() < T * (1.0 - 1e-12)) {
      throw Error(ErrorCode::PolicyGridMismatch, "policy grid [" + std::to_string(grid.front()) + ", " +
                                                     std::to_string(grid.back()) + "] does not cover [0, " +
                                                     std::to_string(T) + "]");
    }
  }
}

// Running cost per (row, node) and total jump rate per (row, node).
struct PolicyTables {
  std::size_t nodes = 0;
  std::vector<double> cost;
  std::vector<double> rate;
};

PolicyTables tabulate(const CostModel& model, const Policy& policy) {
  PolicyTables t;
  t.nodes = model.node_count();
  const std::size_t rows = policy.row_count();
  t.cost.resize(rows * t.nodes);
  t.rate.assign(rows * t.nodes, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto row = policy.row(k);
    model.running_costs(row, std::span<double>(t.cost.data() + k * t.nodes, t.nodes));
    for (EdgeIndex e = 0; e < model.edge_count(); ++e) t.rate[k * t.nodes + model.graph().edge(e).from] += row[e];
  }
  return t;
}

// Integral of e^{-r s} over [a, b].
double discount_weight(double r, double a, double b) noexcept {
  if (r == 0.0) return b - a;
  return std::exp(-r * a) * -std::expm1(-r * (b - a)) / r;
}

double run_path(const Problem& problem, const Policy& policy, const PolicyTables& tables, NodeIndex start,
                PathRng& rng, const JumpObserver& observer) {
  const Graph& graph = problem.model.graph();
  const double T = problem.horizon;
  const double r = problem.discount;
  const std::size_t rows = policy.row_count();
  const auto grid = policy.grid();

  NodeIndex node = start;
  double t = 0.0;
  std::size_t row = 0;
  double total = 0.0;
  double segment_start = 0.0;
  double segment_cost = tables.cost[node];

  for (;;) {
    const double interval_end = (policy.is_stationary() || row + 1 >= rows) ? T : std::min(grid[row + 1], T);
    const double cost = tables.cost[row * tables.nodes + node];
    if (cost != segment_cost) {
      total -= segment_cost * discount_weight(r, segment_start, t);
      segment_start = t;
      segment_cost = cost;
    }
    const double rate = tables.rate[row * tables.nodes + node];
    const double holding = rate > 0.0 ? rng.exponential(rate) : std::numeric_limits<double>::infinity();
    if (t + holding >= interval_end) {
      t = interval_end;
      if (t >= T) break;
      ++row;
      continue;
    }
    t += holding;
    double pick = rng.uniform() * rate;
    EdgeIndex chosen = graph.first_edge(node + 1) - 1;
    for (EdgeIndex e = graph.first_edge(node); e < graph.first_edge(node + 1); ++e) {
      const double lambda = policy.intensity(row, e);
      if (lambda > 0.0 && pick <= lambda) {
        chosen = e;
        break;
      }
      pick -= lambda;
    }
    // Guard against round-off landing on a zero-rate trailing edge.
    while (policy.intensity(row, chosen) == 0.0 && chosen > graph.first_edge(node)) --chosen;
    const NodeIndex next = graph.edge(chosen).to;
    if (observer) observer(t, node, next);
    node = next;
  }
  total -= segment_cost * discount_weight(r, segment_start, T);
  total += std::exp(-r * T) * problem.terminal_payoff[node];
  return total;
}

unsigned resolve_threads(unsigned requested, std::size_t n_paths) {
  unsigned threads = requested;
  if (threads == 0) {
    if (const char* env = std::getenv("HJGRAPH_THREADS")) threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n_paths / 64)));
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double simulate_path(const Problem& problem, const Policy& policy, NodeIndex start_node, std::uint64_t seed,
                     std::uint64_t path_index, const JumpObserver& observer) {
  problem.validate();
  check_policy(problem, policy);
  if (start_node >= problem.node_count()) throw Error(ErrorCode::InvalidArgument, "start node out of range");
  const PolicyTables tables = tabulate(problem.model, policy);
  PathRng rng(seed, path_index);
  return run_path(problem, policy, tables, start_node, rng, observer);
}

SimulationReport simulate(const Problem& problem, const Policy& policy, NodeIndex start_node, std::size_t n_paths,
                          std::uint64_t seed, const SimulationOptions& options) {
  problem.validate();
  check_policy(problem, policy);
  if (n_paths == 0) throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1");
  if (start_node >= problem.node_count()) throw Error(ErrorCode::InvalidArgument, "start node out of range");

  const PolicyTables tables = tabulate(problem.model, policy);
  std::vector<double> values(n_paths);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      PathRng rng(seed, p);
      values[p] = run_path(problem, policy, tables, start_node, rng, {});
    }
  };

  const unsigned threads = resolve_threads(options.threads, n_paths);
  if (threads <= 1) {
    work(0, n_paths);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t block = (n_paths + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(n_paths, begin + block);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  SimulationReport report;
  report.n_paths = n_paths;
  report.seed = seed;
  report.start_node = start_node;
  report.mean_objective = pairwise_sum(values) / static_cast<double>(n_paths);
  if (n_paths > 1) {
    std::vector<double> squares(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
      const double d = values[p] - report.mean_objective;
      squares[p] = d * d;
    }
    const double variance = pairwise_sum(squares) / static_cast<double>(n_paths - 1);
    report.std_error = std::sqrt(variance / static_cast<double>(n_paths));
  }
  if (options.keep_paths) report.path_values = std::move(values);
  return report;
}

std::vector<double> evaluate_stationary_policy(const CostModel& model, const Policy& policy, double r) {
  if (!policy.is_stationary()) throw Error(ErrorCode::InvalidArgument, "policy must be stationary");
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "discount must be positive");
  if (policy.edge_count() != model.edge_count()) {
    throw Error(ErrorCode::PolicyGridMismatch, "policy does not match the model's edges");
  }
  const std::size_t n = model.node_count();
  const Graph& graph = model.graph();
  const auto lambdas = policy.row(0);

  std::vector<double> running(n);
  model.running_costs(lambdas, running);

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) * r;
  Eigen::VectorXd rhs(n);
  for (NodeIndex i = 0; i < n; ++i) {
    for (EdgeIndex e = graph.first_edge(i); e < graph.first_edge(i + 1); ++e) {
      system(i, i) += lambdas[e];
      system(i, graph.edge(e).to) -= lambdas[e];
    }
    rhs(i) = -running[i];
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "policy evaluation matrix is singular");
  const Eigen::VectorXd u = lu.solve(rhs);
  return {u.data(), u.data() + n};
}

double estimate_value_gap(const SimulationReport& report, double reference, double tolerance) {
  if (report.std_error > 0.0) return (report.mean_objective - reference) / report.std_error;
  if (std::abs(report.mean_objective - reference) <= tolerance * (1.0 + std::abs(reference))) return 0.0;
  throw Error(ErrorCode::ZeroVariance, "zero standard error but mean " + std::to_string(report.mean_objective) +
                                           " differs from reference " + std::to_string(reference));
}

}  // namespace hjg
