#include <gtest/gtest.h>

#include <hjgraph/hjgraph.hpp>

#include "fixtures.hpp"

#include <cmath>
#include <random>

namespace hjg {
namespace {

using test::two_node;

DedriftedSeries series_for(const Problem& p, double gamma) {
  return dedrift(solve_finite_horizon(p, {1e-10, 1e-12}), gamma);
}

TEST(Dedrift, SymmetricIsZero) {
  const Problem p = test::make_problem(two_node(CostFamily::Entropic, 1, 1), {0, 0}, 5.0);
  const auto s = series_for(p, 1.0);
  EXPECT_EQ(s.times.front(), 0.0);
  EXPECT_NEAR(s.times.back(), 5.0, 1e-15);
  for (double v : s.values) EXPECT_NEAR(v, 0.0, 1e-8);
}

TEST(Dedrift, CorrectorIsSteadyState) {
  const CostModel m = two_node(CostFamily::Entropic, 4, 1);
  const auto e = solve_ergodic_vanishing_discount(m);
  for (double shift : {0.0, 3.0}) {
    std::vector<double> g = e.xi;
    for (double& x : g) x += shift;
    const auto s = series_for(test::make_problem(m, g, 10.0), e.gamma);
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      EXPECT_NEAR(s.at(k)[0], e.xi[0] + shift, 1e-7);
      EXPECT_NEAR(s.at(k)[1], e.xi[1] + shift, 1e-7);
    }
    const auto q = q_diagnostic(s, e.xi);
    ASSERT_TRUE(q.q_infinity.has_value());
    EXPECT_NEAR(*q.q_infinity, shift, 1e-7);
    for (double x : q.q) EXPECT_NEAR(x, shift, 1e-7);
  }
}

TEST(QDiagnostic, RandomFourNodeInstanceConverges) {
  const Problem base = test::random_instance(31, FamilyMix::Entropic, 4);
  const auto e = solve_ergodic_vanishing_discount(base.model);
  const auto q = q_diagnostic(series_for(base.with_horizon(100.0), e.gamma), e.xi);
  EXPECT_LE(q.max_increase, 1e-9);
  EXPECT_TRUE(q.converged);
  EXPECT_TRUE(q.q_infinity.has_value());
  for (std::size_t k = 1; k < q.q.size(); ++k) EXPECT_LE(q.q[k], q.q[k - 1] + 1e-9);
}

TEST(QDiagnostic, WrongConstantIsDetected) {
  const Problem p = test::make_problem(two_node(CostFamily::Entropic, 4, 1), {0, 0}, 10.0);
  const auto e = solve_ergodic_vanishing_discount(p.model);
  try {
    q_diagnostic(series_for(p, e.gamma - 0.1), e.xi);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::MonotonicityViolation);
  }
}

TEST(QDiagnostic, RequiresNormalizedCorrector) {
  const Problem p = test::make_problem(two_node(CostFamily::Entropic, 1, 1), {0, 0}, 2.0);
  const std::vector<double> xi{1.0, 1.0};
  EXPECT_THROW(q_diagnostic(series_for(p, 1.0), xi), Error);
}

TEST(Semigroup, IdentityAndSteadyState) {
  const CostModel m = two_node(CostFamily::Entropic, 4, 1);
  const auto e = solve_ergodic_vanishing_discount(m);
  const std::vector<double> y{0.3, -1.2};
  EXPECT_EQ(semigroup_apply(m, e.gamma, y, 0.0), y);
  for (double t : {0.5, 3.0, 20.0}) EXPECT_LE(test::max_abs_diff(semigroup_apply(m, e.gamma, e.xi, t), e.xi), 1e-9);
}

TEST(Semigroup, LawAndNonexpansiveness) {
  const Problem p = test::random_instance(41, FamilyMix::Mixed, 4);
  const auto e = solve_ergodic_vanishing_discount(p.model);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(4), y(4);
    for (double& v : x) v = ud(rng);
    for (double& v : y) v = ud(rng);
    const double gap = test::max_abs_diff(x, y);
    for (double t : {0.1, 1.0, 10.0}) {
      const auto sx = semigroup_apply(p.model, e.gamma, x, t);
      const auto sy = semigroup_apply(p.model, e.gamma, y, t);
      EXPECT_LE(test::max_abs_diff(sx, sy), gap + 1e-8);
    }
    if (trial < 10) {
      const auto half = semigroup_apply(p.model, e.gamma, semigroup_apply(p.model, e.gamma, y, 0.5), 0.5);
      EXPECT_LE(test::max_abs_diff(half, semigroup_apply(p.model, e.gamma, y, 1.0)), 1e-8);
    }
  }
}

TEST(StrongMaxPrinciple, SymmetricEntropicStrictlyOrders) {
  const CostModel m = two_node(CostFamily::Entropic, 1, 1);
  const std::vector<double> low{0, 0}, high{0, 1};
  const auto report = check_strong_max_principle(m, 1.0, low, high, 0.5);
  EXPECT_GT(report.min_gap, 0.0);
}

TEST(StrongMaxPrinciple, PreconditionsEnforced) {
  const CostModel ent = two_node(CostFamily::Entropic, 1, 1);
  const std::vector<double> same{0, 1}, low{0, 0}, high{0, 1};
  const auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of([&] { check_strong_max_principle(ent, 1.0, same, same, 0.5); }), ErrorCode::PreconditionUnmet);
  EXPECT_EQ(code_of([&] { check_strong_max_principle(ent, 1.0, high, low, 0.5); }), ErrorCode::PreconditionUnmet);
  const CostModel quad = two_node(CostFamily::Quadratic, 1, 1);
  EXPECT_EQ(code_of([&] { check_strong_max_principle(quad, 0.5, low, high, 0.5); }), ErrorCode::PreconditionUnmet);
}

}  // namespace
}  // namespace hjg
