#pragma once

#include <string>

#include "parabound/fields.hpp"

namespace parabound {

/// On-disk form of a SpaceTimeField: a self-describing text table carrying
/// the mesh geometry, the time levels, the jump mask and row-major nodal
/// values per level (two blocks at jump levels). See README for the exact
/// layout; the format is stable across versions.
struct FieldFile {
  Domain domain;
  std::array<int, 2> nodes_per_axis{2, 1};
  SpaceTimeField field;
};

void save_field(const std::string& path, const SpaceTimeField& field, const SpaceMesh& mesh);
FieldFile load_field(const std::string& path);

}  // namespace parabound
