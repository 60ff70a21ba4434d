#include "parabound/timegrid.hpp"

#include <algorithm>
#include <cmath>

namespace parabound {

TimePartition::TimePartition(std::vector<double> levels, std::vector<std::uint8_t> jump_marks)
    : levels_(std::move(levels)), jump_(std::move(jump_marks)) {
  if (levels_.size() < 2) throw Error("timegrid", "need at least two time levels");
  if (jump_.empty()) jump_.assign(levels_.size(), 0);
  if (jump_.size() != levels_.size()) throw Error("timegrid", "jump mask size mismatch");
  if (levels_.front() != 0.0) throw Error("timegrid", "first level must be t = 0");
  for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
    if (!(levels_[k] < levels_[k + 1]))
      throw Error("timegrid", "levels must be strictly increasing (slab " + std::to_string(k) + ")");
  }
  if (jump_.front() || jump_.back())
    throw Error("timegrid", "jump markers are allowed on interior levels only");
}

TimePartition TimePartition::uniform(double horizon, int slab_count) {
  if (!(horizon > 0.0)) throw Error("timegrid", "horizon must be positive");
  if (slab_count < 1) throw Error("timegrid", "need at least one time slab");
  std::vector<double> levels(slab_count + 1);
  for (int k = 0; k <= slab_count; ++k) levels[k] = horizon * k / slab_count;
  levels[0] = 0.0;
  levels[slab_count] = horizon;
  return TimePartition(std::move(levels), {});
}

double TimePartition::min_slab_length() const {
  double m = levels_[1] - levels_[0];
  for (int s = 1; s < slab_count(); ++s) m = std::min(m, slab_length(s));
  return m;
}

bool TimePartition::any_jump() const {
  return std::any_of(jump_.begin(), jump_.end(), [](std::uint8_t j) { return j != 0; });
}

std::vector<int> TimePartition::jump_levels() const {
  std::vector<int> out;
  for (int k = 0; k < level_count(); ++k)
    if (jump_[k]) out.push_back(k);
  return out;
}

void TimePartition::mark_jump(int k) {
  if (k <= 0 || k >= level_count() - 1)
    throw Error("timegrid", "jump must be at an interior level (t=0 and t=T rejected)");
  jump_[k] = 1;
}

int TimePartition::find_level(double t, double tol) const {
  for (int k = 0; k < level_count(); ++k)
    if (std::abs(levels_[k] - t) <= tol) return k;
  return -1;
}

TimePartition TimePartition::with_inserted_level(double t) const {
  if (!(t > 0.0 && t < horizon())) throw Error("timegrid", "inserted level must be interior");
  std::vector<double> levels;
  std::vector<std::uint8_t> marks;
  bool inserted = false;
  for (int k = 0; k < level_count(); ++k) {
    if (!inserted && levels_[k] > t) {
      levels.push_back(t);
      marks.push_back(0);
      inserted = true;
    }
    if (levels_[k] == t) throw Error("timegrid", "inserted level collides with an existing one");
    levels.push_back(levels_[k]);
    marks.push_back(jump_[k]);
  }
  return TimePartition(std::move(levels), std::move(marks));
}

}  // namespace parabound
