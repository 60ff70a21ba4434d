#include "parabound/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "parabound/field_io.hpp"

namespace parabound {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("config", "key '" + key + "': cannot parse number '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("config", "key '" + key + "': cannot parse integer '" + s + "'");
  }
}

// P1-in-space, linear-in-time point evaluation of a stored field table.
double table_eval(const FieldFile& ff, const SpaceMesh& mesh, Vec x, double t) {
  const TimePartition& part = ff.field.partition();
  int s = 0;
  while (s + 1 < part.slab_count() && part.level(s + 1) <= t) ++s;
  double tau = part.slab_length(s);
  double theta = std::clamp((t - part.level(s)) / tau, 0.0, 1.0);
  std::vector<double> nodal = ff.field.at_slab_time(s, theta);

  auto n = mesh.nodes_per_axis();
  auto h = mesh.spacing();
  const Domain& d = mesh.domain();
  double fx = std::clamp((x[0] - d.origin[0]) / h[0], 0.0, double(n[0] - 1));
  int i = std::min(int(fx), n[0] - 2);
  double lx = fx - i;
  if (mesh.dim() == 1) return (1.0 - lx) * nodal[i] + lx * nodal[i + 1];
  double fy = std::clamp((x[1] - d.origin[1]) / h[1], 0.0, double(n[1] - 1));
  int j = std::min(int(fy), n[1] - 2);
  double ly = fy - j;
  // triangle split along the lower-left/upper-right diagonal
  double va = nodal[mesh.node_index(i, j)], vb = nodal[mesh.node_index(i + 1, j)];
  double vc = nodal[mesh.node_index(i + 1, j + 1)], vd = nodal[mesh.node_index(i, j + 1)];
  if (lx >= ly) return va * (1.0 - lx) + vb * (lx - ly) + vc * ly;
  return va * (1.0 - ly) + vc * lx + vd * (ly - lx);
}

struct TableFn {
  std::shared_ptr<FieldFile> ff;
  std::shared_ptr<SpaceMesh> mesh;
  double operator()(Vec x, double t) const { return table_eval(*ff, *mesh, x, t); }
};

TableFn load_table(const std::string& path) {
  auto ff = std::make_shared<FieldFile>(load_field(path));
  auto mesh = std::make_shared<SpaceMesh>(ff->domain, ff->nodes_per_axis);
  return TableFn{ff, mesh};
}

}  // namespace

SpaceTimeFn make_source(const std::string& name, const Domain& domain) {
  (void)domain;
  if (name == "zero") return {"zero", [](Vec, double) { return 0.0; }};
  if (name == "one") return {"one", [](Vec, double) { return 1.0; }};
  if (name.rfind("table:", 0) == 0) {
    TableFn fn = load_table(name.substr(6));
    return {name, [fn](Vec x, double t) { return fn(x, t); }};
  }
  throw Error("config", "unknown source '" + name + "' (expected zero | one | table:<path>)");
}

SpatialFn make_initial(const std::string& name, const Domain& domain) {
  if (name == "zero") return {"zero", [](Vec) { return 0.0; }};
  if (name == "sin_pi") {
    Domain d = domain;
    return {"sin_pi", [d](Vec x) {
              double v = std::sin(M_PI * (x[0] - d.origin[0]) / d.extents[0]);
              if (d.dim == 2) v *= std::sin(M_PI * (x[1] - d.origin[1]) / d.extents[1]);
              return v;
            }};
  }
  if (name.rfind("table:", 0) == 0) {
    TableFn fn = load_table(name.substr(6));
    return {name, [fn](Vec x) { return fn(x, 0.0); }};
  }
  throw Error("config", "unknown initial '" + name + "' (expected zero | sin_pi | table:<path>)");
}

namespace {

std::vector<JumpInjection> parse_jumps(const std::string& value) {
  // "t=0.5, kind=bump, amp=0.1; t=0.7, kind=restart-interp"
  std::vector<JumpInjection> out;
  for (const std::string& entry : split(value, ';')) {
    if (entry.empty()) continue;
    std::string body = entry;
    if (body.front() == '[') body = body.substr(1);
    if (!body.empty() && body.back() == ']') body.pop_back();
    JumpInjection j;
    bool have_t = false;
    for (const std::string& item : split(body, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("config", "bad jump entry '" + entry + "'");
      std::string k = trim(item.substr(0, eq)), v = trim(item.substr(eq + 1));
      if (k == "t") {
        j.time = to_double(v, "jumps.t");
        have_t = true;
      } else if (k == "kind") {
        if (v == "bump")
          j.kind = JumpInjection::Kind::Bump;
        else if (v == "restart-interp")
          j.kind = JumpInjection::Kind::RestartInterp;
        else
          throw Error("config", "unknown jump kind '" + v + "'");
      } else if (k == "amp") {
        j.amplitude = to_double(v, "jumps.amp");
      } else {
        throw Error("config", "unknown jump key '" + k + "'");
      }
    }
    if (!have_t) throw Error("config", "jump entry without t=");
    out.push_back(j);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error("config", origin + ":" + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config", origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    kv[section.empty() ? key : section + "." + key] = value;
  }

  RunConfig cfg;
  cfg.raw = kv;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  // [problem]
  if (auto m = get("problem.manufactured")) {
    cfg.manufactured_name = *m;
    cfg.problem = manufactured(*m).spec;
  } else {
    Domain d;
    d.dim = get("problem.dim") ? to_int(*get("problem.dim"), "problem.dim") : 1;
    if (auto e = get("problem.extents")) {
      auto parts = split(*e, ',');
      for (std::size_t i = 0; i < parts.size() && i < 2; ++i)
        d.extents[i] = to_double(parts[i], "problem.extents");
    }
    if (auto o = get("problem.origin")) {
      auto parts = split(*o, ',');
      for (std::size_t i = 0; i < parts.size() && i < 2; ++i)
        d.origin[i] = to_double(parts[i], "problem.origin");
    }
    cfg.problem.domain = d;
    cfg.problem.horizon_T = get("problem.T") ? to_double(*get("problem.T"), "problem.T") : 1.0;
    std::string kind = get("problem.convection.kind").value_or("constant");
    std::vector<double> coeffs;
    if (auto c = get("problem.convection.coeffs"))
      for (const auto& p : split(*c, ',')) coeffs.push_back(to_double(p, "convection.coeffs"));
    if (kind == "constant") {
      Vec c{0.0, 0.0};
      for (std::size_t i = 0; i < coeffs.size() && i < 2; ++i) c[i] = coeffs[i];
      cfg.problem.convection = ConvectionField::constant(c);
    } else if (kind == "linear") {
      std::array<std::array<double, 2>, 2> A{{{0, 0}, {0, 0}}};
      if (d.dim == 1) {
        if (!coeffs.empty()) A[0][0] = coeffs[0];
      } else {
        if (coeffs.size() != 4)
          throw Error("config", "linear convection in 2D needs 4 coefficients a11,a12,a21,a22");
        A = {{{coeffs[0], coeffs[1]}, {coeffs[2], coeffs[3]}}};
      }
      cfg.problem.convection = ConvectionField::linear(A);
    } else {
      throw Error("config", "unknown convection kind '" + kind + "'");
    }
    cfg.problem.source_f = make_source(get("problem.source").value_or("zero"), d);
    cfg.problem.initial_phi = make_initial(get("problem.initial").value_or("zero"), d);
  }

  // [solve]
  cfg.solve.nx = get("solve.nx") ? to_int(*get("solve.nx"), "solve.nx") : 21;
  cfg.solve.ny = get("solve.ny") ? to_int(*get("solve.ny"), "solve.ny") : cfg.solve.nx;
  cfg.solve.nt = get("solve.nt") ? to_int(*get("solve.nt"), "solve.nt") : 20;
  std::string disc = get("solve.convection_disc").value_or("centered");
  if (disc == "centered")
    cfg.solve.convection_disc = ConvectionDisc::Centered;
  else if (disc == "upwind")
    cfg.solve.convection_disc = ConvectionDisc::Upwind;
  else
    throw Error("config", "unknown convection_disc '" + disc + "'");
  if (auto f = get("solve.field")) cfg.load_field = *f;

  // [certify]
  std::string cs = get("certify.case").value_or("div0");
  if (cs == "div0")
    cfg.bound_case = BoundCase::Div0;
  else if (cs == "delta")
    cfg.bound_case = BoundCase::Delta;
  else
    throw Error("config", "unknown case '" + cs + "' (expected div0 | delta)");
  std::string ex = get("certify.extraction").value_or("combined");
  if (ex == "combined")
    cfg.extraction = Extraction::Combined;
  else if (ex == "terminal")
    cfg.extraction = Extraction::Terminal;
  else if (ex == "weighted")
    cfg.extraction = Extraction::Weighted;
  else if (ex == "simplified")
    cfg.extraction = Extraction::Simplified;
  else
    throw Error("config", "unknown extraction '" + ex + "'");
  std::string fx = get("certify.flux").value_or("avg");
  if (fx == "avg")
    cfg.flux = FluxStrategy::Average;
  else if (fx == "min")
    cfg.flux = FluxStrategy::Minimize;
  else
    throw Error("config", "unknown flux strategy '" + fx + "' (expected avg | min)");
  if (auto g = get("certify.flux_weight_grid")) {
    std::vector<double> grid;
    for (const auto& p : split(*g, ',')) grid.push_back(to_double(p, "flux_weight_grid"));
    if (grid.empty()) throw Error("config", "flux_weight_grid must not be empty");
    cfg.flux_weight_grid = grid;
  }
  std::string gk = get("certify.greeks").value_or("default");
  if (gk == "default")
    cfg.greeks = GreekChoice::Default;
  else if (gk == "optimize")
    cfg.greeks = GreekChoice::Optimize;
  else
    throw Error("config", "unknown greeks choice '" + gk + "'");
  std::string lm = get("certify.lambda").value_or("auto");
  if (lm == "auto")
    cfg.lambda_mode = LambdaSpec::Mode::Auto;
  else if (lm == "one")
    cfg.lambda_mode = LambdaSpec::Mode::One;
  else if (lm == "zero")
    cfg.lambda_mode = LambdaSpec::Mode::Zero;
  else
    throw Error("config", "unknown lambda choice '" + lm + "'");
  if (auto j = get("certify.jumps")) cfg.jumps = parse_jumps(*j);

  // [study]
  if (auto l = get("study.levels")) cfg.levels = to_int(*l, "study.levels");

  // [output]
  cfg.report_path = get("output.report").value_or("");
  cfg.table_path = get("output.table").value_or("");
  cfg.field_path = get("output.field").value_or("");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace parabound
