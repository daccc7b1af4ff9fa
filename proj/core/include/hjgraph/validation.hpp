#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjgraph/cost_model.hpp"

namespace hjg {

/// One sampled property of the cost model. `asserted` is false for checks
/// that are only informative for this model (strictness on a model whose
/// strict_monotone flag is false); such entries never fail the report.
struct PropertyCheck {
  std::string name;
  bool passed = true;
  bool asserted = true;
  std::size_t samples = 0;
  std::string witness;  // empty when passed
};

struct ValidationReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const noexcept;
  const PropertyCheck* find(const std::string& name) const noexcept;
};

/// Sampled audit of the standing assumptions on L and the derived properties
/// of H: finiteness, lower semi-continuity at the boundary, lower bound,
/// superlinear growth, convexity, coordinatewise monotonicity and (reported,
/// asserted only for strictly monotone models) strict monotonicity.
/// Requires sample_budget >= 100. Failures are report entries, not exceptions.
ValidationReport validate_assumptions(const CostModel& model, std::size_t sample_budget, std::uint64_t seed = 20240611);

}  // namespace hjg
