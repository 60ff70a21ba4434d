#pragma once

#include <cstdint>
#include <vector>

#include "parabound/common.hpp"

namespace parabound {

/// Strictly increasing time levels t_0 = 0 < t_1 < ... < t_N = T, with jump
/// markers on interior levels. A jump-marked level carries two-sided field
/// values (left/right limits) in the fields living on this partition.
class TimePartition {
 public:
  TimePartition() = default;
  TimePartition(std::vector<double> levels, std::vector<std::uint8_t> jump_marks);

  static TimePartition uniform(double horizon, int slab_count);

  int level_count() const { return static_cast<int>(levels_.size()); }
  int slab_count() const { return level_count() - 1; }
  double level(int k) const { return levels_[k]; }
  const std::vector<double>& levels() const { return levels_; }
  double horizon() const { return levels_.back(); }
  double slab_length(int s) const { return levels_[s + 1] - levels_[s]; }
  double min_slab_length() const;

  bool has_jump(int k) const { return jump_[k] != 0; }
  bool any_jump() const;
  std::vector<int> jump_levels() const;
  void mark_jump(int k);

  /// Index of the level equal to `t` within `tol`, or -1.
  int find_level(double t, double tol) const;

  /// New partition with an extra (non-jump) level inserted at `t`.
  /// Existing levels and marks are preserved; `t` must not collide.
  TimePartition with_inserted_level(double t) const;

  bool operator==(const TimePartition& o) const = default;

 private:
  std::vector<double> levels_;
  std::vector<std::uint8_t> jump_;
};

}  // namespace parabound
