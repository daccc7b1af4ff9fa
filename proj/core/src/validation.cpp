#include "hjgraph/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

constexpr double kTolerance = 1e-10;

std::string format_vector(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ')';
  return os.str();
}

class Sampler {
 public:
  Sampler(const CostModel& model, std::uint64_t seed) : model_(model), rng_(seed) {}

  NodeIndex node() { return std::uniform_int_distribution<NodeIndex>(0, model_.node_count() - 1)(rng_); }

  // p-vectors are drawn around -shift so both sides of the quadratic kink are hit.
  std::vector<double> p_vector(NodeIndex i) {
    std::uniform_real_distribution<double> offset(-4.0, 4.0);
    std::vector<double> p(model_.graph().out_degree(i));
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] = -model_.edge_cost(model_.graph().first_edge(i) + k).shift + offset(rng_);
    }
    return p;
  }

  std::vector<double> intensities(NodeIndex i, double max_value) {
    std::uniform_real_distribution<double> u(0.0, max_value);
    std::vector<double> l(model_.graph().out_degree(i));
    for (double& x : l) x = u(rng_);
    return l;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  const CostModel& model_;
  std::mt19937_64 rng_;
};

PropertyCheck named(const char* name) {
  PropertyCheck check;
  check.name = name;
  return check;
}

void fail(PropertyCheck& check, std::string witness) {
  if (check.passed) {
    check.passed = false;
    check.witness = std::move(witness);
  }
}

}  // namespace

bool ValidationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed || !c.asserted; });
}

const PropertyCheck* ValidationReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_assumptions(const CostModel& model, std::size_t sample_budget, std::uint64_t seed) {
  if (sample_budget < 100) throw Error(ErrorCode::InvalidArgument, "sample_budget must be >= 100");
  Sampler sampler(model, seed);
  const Graph& graph = model.graph();
  const std::size_t n = model.node_count();

  ValidationReport report;

  PropertyCheck finite = named("finiteness");
  for (NodeIndex i = 0; i < n; ++i) {
    const std::vector<double> ones(graph.out_degree(i), 1.0);
    ++finite.samples;
    if (!std::isfinite(model.cost(i, ones))) fail(finite, "node " + std::to_string(i) + ": L(i, 1) not finite");
  }
  report.checks.push_back(finite);

  PropertyCheck lsc = named("lower_semicontinuity");
  for (NodeIndex i = 0; i < n; ++i) {
    const std::vector<double> zero(graph.out_degree(i), 0.0);
    const double at_zero = model.cost(i, zero);
    for (double eps : {1e-4, 1e-8, 1e-12}) {
      const std::vector<double> near(graph.out_degree(i), eps);
      ++lsc.samples;
      if (at_zero > model.cost(i, near) + static_cast<double>(graph.out_degree(i)) * std::sqrt(eps)) {
        fail(lsc, "node " + std::to_string(i) + ": L(i, 0) exceeds liminf near 0 at eps=" + std::to_string(eps));
      }
    }
  }
  report.checks.push_back(lsc);

  const std::size_t budget = sample_budget;

  PropertyCheck bounded = named("bounded_below");
  for (std::size_t s = 0; s < budget; ++s) {
    const NodeIndex i = sampler.node();
    const auto lambdas = sampler.intensities(i, s % 2 == 0 ? 10.0 : 1000.0);
    ++bounded.samples;
    if (model.cost(i, lambdas) < model.cost_lower_bound(i) - kTolerance * (1.0 + std::abs(model.cost_lower_bound(i)))) {
      fail(bounded, "node " + std::to_string(i) + ", lambda=" + format_vector(lambdas));
    }
  }
  report.checks.push_back(bounded);

  // L(i, s d) / s along random directions with unit sup-norm must keep growing.
  PropertyCheck superlinear = named("superlinearity");
  for (std::size_t s = 0; s < std::max<std::size_t>(budget / 10, 10); ++s) {
    const NodeIndex i = sampler.node();
    auto direction = sampler.intensities(i, 1.0);
    direction[sampler.index(direction.size())] = 1.0;
    double previous = -HUGE_VAL;
    ++superlinear.samples;
    for (int k = 3; k <= 7; ++k) {
      const double scale = std::pow(10.0, k);
      std::vector<double> lambdas(direction);
      for (double& x : lambdas) x *= scale;
      const double ratio = model.cost(i, lambdas) / scale;
      if (!(ratio > previous)) {
        fail(superlinear, "node " + std::to_string(i) + ", direction=" + format_vector(direction) +
                              ": L/|lambda| stops growing at |lambda|=1e" + std::to_string(k));
        break;
      }
      previous = ratio;
    }
  }
  report.checks.push_back(superlinear);

  PropertyCheck convex = named("convexity");
  PropertyCheck monotone = named("monotonicity");
  PropertyCheck strict = named("strict_monotonicity");
  strict.asserted = model.strict_monotone();
  for (std::size_t s = 0; s < budget; ++s) {
    const NodeIndex i = sampler.node();
    const auto p = sampler.p_vector(i);
    const auto q = sampler.p_vector(i);
    const double hp = model.hamiltonian(i, p);
    const double hq = model.hamiltonian(i, q);

    const double t = sampler.uniform(0.0, 1.0);
    std::vector<double> mix(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) mix[k] = t * p[k] + (1.0 - t) * q[k];
    ++convex.samples;
    const double chord = t * hp + (1.0 - t) * hq;
    if (model.hamiltonian(i, mix) > chord + kTolerance * (1.0 + std::abs(chord))) {
      fail(convex, "node " + std::to_string(i) + ", p=" + format_vector(p) + ", p'=" + format_vector(q) +
                       ", t=" + std::to_string(t));
    }

    std::vector<double> raised(p);
    for (double& x : raised) x += sampler.uniform(0.0, 1.0);
    ++monotone.samples;
    if (hp > model.hamiltonian(i, raised) + kTolerance * (1.0 + std::abs(hp))) {
      fail(monotone, "node " + std::to_string(i) + ", p=" + format_vector(p) + ", p'=" + format_vector(raised));
    }

    std::vector<double> bumped(p);
    bumped[sampler.index(p.size())] += sampler.uniform(0.1, 1.0);
    ++strict.samples;
    if (!(model.hamiltonian(i, bumped) > hp)) {
      fail(strict, "node " + std::to_string(i) + ", p=" + format_vector(p) + ", p'=" + format_vector(bumped) +
                       ": H(i, p') == H(i, p)");
    }
  }
  report.checks.push_back(convex);
  report.checks.push_back(monotone);
  report.checks.push_back(strict);
  return report;
}

}  // namespace hjg
