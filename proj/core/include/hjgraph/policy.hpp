#pragma once

#include <span>
#include <vector>

#include "hjgraph/graph.hpp"

namespace hjg {

/// Feedback intensities lambda(i, j) >= 0, one column per canonical edge.
///
/// A time-varying policy holds one row per grid point t_0 < ... < t_M and is
/// read as piecewise constant: on [t_k, t_{k+1}) the row of t_k applies (the
/// last row only at t_M itself). A stationary policy has a single row.
class Policy {
 public:
  enum class Mode { TimeVarying, Stationary };

  static Policy stationary(std::vector<double> intensities);
  static Policy time_varying(std::vector<double> grid, std::vector<double> table, std::size_t edge_count);

  Mode mode() const noexcept { return mode_; }
  bool is_stationary() const noexcept { return mode_ == Mode::Stationary; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t row_count() const noexcept { return edge_count_ ? table_.size() / edge_count_ : 0; }
  std::span<const double> grid() const noexcept { return grid_; }

  std::span<const double> row(std::size_t k) const noexcept { return {table_.data() + k * edge_count_, edge_count_}; }
  double intensity(std::size_t k, EdgeIndex e) const noexcept { return table_[k * edge_count_ + e]; }

  /// Index of the row in force at time t (0 for stationary policies).
  std::size_t row_at(double t) const noexcept;

 private:
  Policy() = default;

  Mode mode_ = Mode::Stationary;
  std::size_t edge_count_ = 0;
  std::vector<double> grid_;
  std::vector<double> table_;
};

}  // namespace hjg
