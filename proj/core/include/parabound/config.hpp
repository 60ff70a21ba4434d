#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parabound/majorant.hpp"
#include "parabound/nonconforming.hpp"
#include "parabound/problem.hpp"
#include "parabound/solver.hpp"

namespace parabound {

enum class BoundCase { Div0, Delta };
enum class Extraction { Combined, Terminal, Weighted, Simplified };
enum class FluxStrategy { Average, Minimize };
enum class GreekChoice { Default, Optimize };

/// Parsed run configuration (INI-style sections; see README for the schema).
struct RunConfig {
  // [problem]
  std::optional<std::string> manufactured_name;
  ProblemSpec problem;

  // [solve]
  SolveConfig solve;
  std::optional<std::string> load_field;  // certify on a stored field instead of solving

  // [certify]
  BoundCase bound_case = BoundCase::Div0;
  Extraction extraction = Extraction::Combined;
  FluxStrategy flux = FluxStrategy::Average;
  std::optional<std::vector<double>> flux_weight_grid;
  GreekChoice greeks = GreekChoice::Default;
  LambdaSpec::Mode lambda_mode = LambdaSpec::Mode::Auto;
  std::vector<JumpInjection> jumps;

  // [study]
  int levels = 3;

  // [output]
  std::string report_path;
  std::string table_path;
  std::string field_path;

  // raw key/value echo for reports
  std::map<std::string, std::string> raw;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Catalog lookup for the [problem] `source` / `initial` keys.
SpaceTimeFn make_source(const std::string& name, const Domain& domain);
SpatialFn make_initial(const std::string& name, const Domain& domain);

}  // namespace parabound
