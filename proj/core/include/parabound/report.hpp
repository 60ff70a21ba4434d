#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parabound/config.hpp"
#include "parabound/fields.hpp"
#include "parabound/majorant.hpp"

namespace parabound {

struct MeshMetadata {
  int dim = 1;
  int nx = 0, ny = 1, nt = 0;
  double hx = 0.0, hy = 0.0, dt = 0.0;
  int nodes = 0, cells = 0;
};

struct JumpSummary {
  double tau = 0.0;
  double jump_norm = 0.0;
  double left_bound = 0.0;
  double penalty = 0.0;  // contribution ||g|| T_tau + ||g||^2 / 2
};

/// Machine-readable certification record (JSON on disk).
struct Report {
  std::string tool_version;
  std::map<std::string, std::string> config_echo;
  MeshMetadata mesh;
  CertifiedBound bound;
  std::optional<NormBundle> true_norms;
  std::optional<double> true_error;        // in the certified norm
  std::optional<double> efficiency_index;  // bound.value / true_error
  std::optional<double> method1_value;     // jump runs: projection route
  std::optional<double> method2_hat_value; // delta jump runs: the hat-norm form
  std::vector<JumpSummary> jumps;
  double wall_ms = 0.0;
};

std::string to_json(const Report& report);
void write_report(const std::string& path, const Report& report);

struct StudyRow {
  int level = 0;
  int nx = 0, ny = 1, nt = 0;
  double h = 0.0, dt = 0.0;
  double true_error = 0.0;
  double bound = 0.0;
  double efficiency_index = 0.0;
  double flux_gap = 0.0;
  double residual_free = 0.0;
  double ic_mismatch = 0.0;
  double jump_penalty = 0.0;
};

struct StudyTable {
  std::vector<StudyRow> rows;
  std::string to_csv() const;
};

void write_table(const std::string& path, const StudyTable& table);

}  // namespace parabound
