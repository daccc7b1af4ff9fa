#pragma once

#include <cstdint>

#include "hjgraph/problem.hpp"

namespace hjg {

enum class FamilyMix { Entropic, Quadratic, Mixed };

/// Parameters of the random fixture generator used by tests, benchmarks and
/// `hjgraph random`.
struct RandomInstanceSpec {
  std::size_t nodes = 4;
  FamilyMix families = FamilyMix::Entropic;
  double extra_edge_probability = 0.3;
  double scale_min = 0.5;
  double scale_max = 2.0;
  double shift_abs = 0.5;
  double payoff_abs = 1.0;
  double horizon = 1.0;
  double discount = 0.0;
};

/// Strongly connected by construction: a random Hamiltonian cycle plus
/// independent extra edges. Deterministic in (spec, seed).
Problem random_problem(const RandomInstanceSpec& spec, std::uint64_t seed);

}  // namespace hjg
