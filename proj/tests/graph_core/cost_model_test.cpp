#include <gtest/gtest.h>

#include <hjgraph/hjgraph.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

namespace hjg {
namespace {

using test::make_model;

CostModel single_edge(CostFamily family, double a, double b) { return test::two_node(family, a, a, b); }

TEST(Cost, SpecExamples) {
  const std::vector<double> one{1.0}, four{4.0}, two{2.0};
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Entropic, 1, 0).cost(0, one), -1.0);
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Quadratic, 2, 0).cost(0, four), 4.0);
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Entropic, 2, 1).cost(0, two), -4.0);
}

TEST(Cost, EntropicZeroIntensityIsTheLimit) {
  const EdgeCost c{CostFamily::Entropic, 3.0, 0.7};
  EXPECT_EQ(c.cost(0.0), 0.0);
  EXPECT_NEAR(c.cost(1e-12), 0.0, 1e-10);
}

TEST(Cost, NegativeIntensityRejected) {
  const std::vector<double> neg{-0.1};
  try {
    single_edge(CostFamily::Quadratic, 1, 0).cost(0, neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeIntensity);
  }
}

TEST(Hamiltonian, SpecExamples) {
  const std::vector<double> zero{0.0}, minus5{-5.0}, ln3{std::log(3.0)};
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Entropic, 1, 0).hamiltonian(0, zero), 1.0);
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Quadratic, 1, 0).hamiltonian(0, minus5), 0.0);
  const CostModel m = single_edge(CostFamily::Entropic, 2, 0);
  EXPECT_NEAR(m.hamiltonian(0, ln3), 6.0, 1e-12);
  EXPECT_NEAR(test::grid_maximize(m, 0, ln3, 20.0).value, 6.0, 1e-9);
}

TEST(Hamiltonian, OverflowIsReported) {
  const std::vector<double> huge{800.0};
  try {
    single_edge(CostFamily::Entropic, 1, 0).hamiltonian(0, huge);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericOverflow);
  }
}

CostModel fan(CostFamily family, double a1, double a2) {
  return make_model(3, {{0, 1, {family, a1, 0}}, {0, 2, {family, a2, 0}}, {1, 0, {family, 1, 0}}, {2, 0, {family, 1, 0}}});
}

TEST(OptimalIntensities, SpecExamples) {
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(single_edge(CostFamily::Entropic, 1, 0).optimal_intensities(0, zero)[0], 1.0);

  const CostModel quad = fan(CostFamily::Quadratic, 2, 2);
  const std::vector<double> p1{3.0, -1.0};
  const auto l1 = quad.optimal_intensities(0, p1);
  EXPECT_DOUBLE_EQ(l1[0], 6.0);
  EXPECT_DOUBLE_EQ(l1[1], 0.0);
  EXPECT_DOUBLE_EQ(quad.hamiltonian(0, p1), 9.0);
  const auto grid1 = test::grid_maximize(quad, 0, p1, 20.0);
  EXPECT_NEAR(grid1.value, 9.0, 1e-9);
  EXPECT_NEAR(grid1.argmax[0], 6.0, 1e-4);
  EXPECT_NEAR(grid1.argmax[1], 0.0, 1e-4);

  const CostModel ent = fan(CostFamily::Entropic, 1, 1);
  const std::vector<double> p2{std::log(2.0), std::log(5.0)};
  const auto l2 = ent.optimal_intensities(0, p2);
  EXPECT_NEAR(l2[0], 2.0, 1e-12);
  EXPECT_NEAR(l2[1], 5.0, 1e-12);
  EXPECT_NEAR(ent.hamiltonian(0, p2), 7.0, 1e-12);
  const auto grid2 = test::grid_maximize(ent, 0, p2, 20.0);
  EXPECT_NEAR(grid2.value, 7.0, 1e-9);
  EXPECT_NEAR(grid2.argmax[0], 2.0, 1e-4);
  EXPECT_NEAR(grid2.argmax[1], 5.0, 1e-4);
}

CostModel mixed_model() {
  return make_model(3, {{0, 1, {CostFamily::Entropic, 1.5, 0.3}},
                        {0, 2, {CostFamily::Quadratic, 0.7, -0.4}},
                        {1, 2, {CostFamily::Quadratic, 2.0, 0.5}},
                        {2, 0, {CostFamily::Entropic, 0.8, -0.2}},
                        {1, 0, {CostFamily::Entropic, 1.1, 0.0}}});
}

TEST(HamiltonianProperties, SupremumAttainedAtMaximizer) {
  const CostModel m = mixed_model();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pd(-2.0, 2.0), ld(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    for (NodeIndex i = 0; i < m.node_count(); ++i) {
      const std::size_t d = m.graph().out_degree(i);
      std::vector<double> p(d), lambda(d);
      for (auto& x : p) x = pd(rng);
      const double h = m.hamiltonian(i, p);
      for (auto& x : lambda) x = ld(rng);
      double gain = -m.cost(i, lambda);
      for (std::size_t j = 0; j < d; ++j) gain += lambda[j] * p[j];
      EXPECT_LE(gain, h + 1e-10);
      const auto star = m.optimal_intensities(i, p);
      double at_star = -m.cost(i, star);
      for (std::size_t j = 0; j < d; ++j) at_star += star[j] * p[j];
      EXPECT_NEAR(at_star, h, 1e-12 * (1.0 + std::abs(h)));
    }
  }
}

TEST(HamiltonianProperties, ConvexAndMonotone) {
  const CostModel m = mixed_model();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pd(-2.0, 2.0), ud(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const NodeIndex i = trial % m.node_count();
    const std::size_t d = m.graph().out_degree(i);
    std::vector<double> p(d), q(d), mid(d), up(d);
    const double t = ud(rng);
    for (std::size_t j = 0; j < d; ++j) {
      p[j] = pd(rng);
      q[j] = pd(rng);
      mid[j] = t * p[j] + (1 - t) * q[j];
      up[j] = p[j] + ud(rng);
    }
    EXPECT_LE(m.hamiltonian(i, mid), t * m.hamiltonian(i, p) + (1 - t) * m.hamiltonian(i, q) + 1e-10);
    EXPECT_LE(m.hamiltonian(i, p), m.hamiltonian(i, up));
  }
}

TEST(HamiltonianProperties, GradientMatchesMaximizer) {
  const CostModel m = mixed_model();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pd(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const NodeIndex i = trial % m.node_count();
    const std::size_t d = m.graph().out_degree(i);
    std::vector<double> p(d);
    for (auto& x : p) x = pd(rng);
    const auto star = m.optimal_intensities(i, p);
    for (std::size_t j = 0; j < d; ++j) {
      const double step = 1e-6;
      auto hi = p, lo = p;
      hi[j] += step;
      lo[j] -= step;
      const double slope = (m.hamiltonian(i, hi) - m.hamiltonian(i, lo)) / (2 * step);
      EXPECT_LE(std::abs(slope - star[j]), 1e-6 * (1.0 + std::abs(star[j])));
    }
  }
}

TEST(LowerBound, MatchesAnalyticMinimum) {
  const EdgeCost ent{CostFamily::Entropic, 2.0, 0.5};
  EXPECT_NEAR(ent.lower_bound(), -2.0 * std::exp(0.5), 1e-12);
  EXPECT_NEAR(ent.cost(2.0 * std::exp(0.5)), ent.lower_bound(), 1e-12);
  const EdgeCost quad{CostFamily::Quadratic, 2.0, 0.5};
  EXPECT_NEAR(quad.lower_bound(), -0.25, 1e-12);
  EXPECT_NEAR(quad.cost(1.0), quad.lower_bound(), 1e-12);

  const CostModel m = mixed_model();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ld(0.0, 20.0);
  for (int trial = 0; trial < 500; ++trial) {
    const NodeIndex i = trial % m.node_count();
    std::vector<double> lambda(m.graph().out_degree(i));
    for (auto& x : lambda) x = ld(rng);
    EXPECT_GE(m.cost(i, lambda), m.cost_lower_bound(i) - 1e-12);
  }
}

TEST(CostModel, StrictMonotoneFlagFollowsFamilies) {
  EXPECT_TRUE(test::two_node(CostFamily::Entropic, 1, 2).strict_monotone());
  EXPECT_FALSE(test::two_node(CostFamily::Quadratic, 1, 2).strict_monotone());
  EXPECT_FALSE(mixed_model().strict_monotone());
}

TEST(CostModel, VectorHelpersAgreeWithPerNodeCalls) {
  const CostModel m = mixed_model();
  const std::vector<double> values{0.3, -0.5, 1.2};
  std::vector<double> h(3), lambda(m.edge_count()), costs(3);
  m.hamiltonians(values, h);
  m.intensities(values, lambda);
  m.running_costs(lambda, costs);
  for (NodeIndex i = 0; i < 3; ++i) {
    std::vector<double> p;
    for (NodeIndex j : m.graph().out_neighbors(i)) p.push_back(values[j] - values[i]);
    EXPECT_DOUBLE_EQ(h[i], m.hamiltonian(i, p));
    const auto star = m.optimal_intensities(i, p);
    for (std::size_t k = 0; k < star.size(); ++k) EXPECT_DOUBLE_EQ(lambda[m.graph().first_edge(i) + k], star[k]);
    EXPECT_DOUBLE_EQ(costs[i], m.cost(i, star));
  }
}

}  // namespace
}  // namespace hjg
