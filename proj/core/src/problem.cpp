#include "hjgraph/problem.hpp"

#include <cmath>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

void Problem::validate() const {
  if (terminal_payoff.size() != model.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "terminal payoff has " + std::to_string(terminal_payoff.size()) +
                                                " entries for " + std::to_string(model.node_count()) + " nodes");
  }
  for (double g : terminal_payoff) {
    if (!std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "terminal payoff must be finite");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (!(discount >= 0.0) || !std::isfinite(discount)) {
    throw Error(ErrorCode::InvalidArgument, "discount must be non-negative");
  }
}

Problem Problem::with_horizon(double T) const {
  Problem p = *this;
  p.horizon = T;
  return p;
}

Problem Problem::with_discount(double r) const {
  Problem p = *this;
  p.discount = r;
  return p;
}

Problem Problem::with_terminal_payoff(std::vector<double> g) const {
  Problem p = *this;
  p.terminal_payoff = std::move(g);
  return p;
}

}  // namespace hjg
