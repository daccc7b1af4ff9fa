#include "hjgraph/policy.hpp"

#include <algorithm>
#include <cmath>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

void check_intensities(std::span<const double> values) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "policy intensities must be finite and non-negative");
    }
  }
}

}  // namespace

Policy Policy::stationary(std::vector<double> intensities) {
  check_intensities(intensities);
  Policy p;
  p.mode_ = Mode::Stationary;
  p.edge_count_ = intensities.size();
  p.table_ = std::move(intensities);
  return p;
}

Policy Policy::time_varying(std::vector<double> grid, std::vector<double> table, std::size_t edge_count) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "time-varying policy needs a grid");
  if (table.size() != grid.size() * edge_count) {
    throw Error(ErrorCode::InvalidArgument, "policy table must have one row per grid point");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorCode::InvalidArgument, "policy grid must be strictly increasing");
  }
  check_intensities(table);
  Policy p;
  p.mode_ = Mode::TimeVarying;
  p.edge_count_ = edge_count;
  p.grid_ = std::move(grid);
  p.table_ = std::move(table);
  return p;
}

std::size_t Policy::row_at(double t) const noexcept {
  if (mode_ == Mode::Stationary) return 0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.begin()) return 0;
  return static_cast<std::size_t>(it - grid_.begin()) - 1;
}

}  // namespace hjg
