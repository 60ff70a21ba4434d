#include "parabound/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace parabound {

namespace {

std::string expect_token(std::istream& in, const std::string& what) {
  std::string tok;
  if (!(in >> tok)) throw Error("field_io", "unexpected end of file, expected " + what);
  return tok;
}

void expect_keyword(std::istream& in, const std::string& kw) {
  std::string tok = expect_token(in, "'" + kw + "'");
  if (tok != kw) throw Error("field_io", "expected '" + kw + "', found '" + tok + "'");
}

}  // namespace

void save_field(const std::string& path, const SpaceTimeField& field, const SpaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("field_io", "cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  const Domain& d = mesh.domain();
  out << "parabound-field 1\n";
  out << "dim " << d.dim << "\n";
  out << "nodes";
  for (int i = 0; i < d.dim; ++i) out << " " << mesh.nodes_per_axis()[i];
  out << "\norigin";
  for (int i = 0; i < d.dim; ++i) out << " " << d.origin[i];
  out << "\nextents";
  for (int i = 0; i < d.dim; ++i) out << " " << d.extents[i];
  const TimePartition& part = field.partition();
  out << "\nlevels " << part.level_count() << "\ntimes";
  for (double t : part.levels()) out << " " << t;
  auto jumps = part.jump_levels();
  out << "\njumps " << jumps.size();
  for (int k : jumps) out << " " << k;
  out << "\nvalues " << field.node_count() << "\n";
  for (int k = 0; k < part.level_count(); ++k) {
    for (Side side : {Side::Left, Side::Right}) {
      const auto& vals = field.values(k, side);
      for (int n = 0; n < field.node_count(); ++n) out << vals[n] << (n + 1 == field.node_count() ? '\n' : ' ');
      if (!part.has_jump(k)) break;
    }
  }
  if (!out) throw Error("field_io", "write to '" + path + "' failed");
}

FieldFile load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("field_io", "cannot open '" + path + "'");
  expect_keyword(in, "parabound-field");
  int version = 0;
  in >> version;
  if (version != 1) throw Error("field_io", "unsupported field file version");

  FieldFile ff;
  expect_keyword(in, "dim");
  in >> ff.domain.dim;
  if (ff.domain.dim != 1 && ff.domain.dim != 2) throw Error("field_io", "bad dimension");
  expect_keyword(in, "nodes");
  for (int i = 0; i < ff.domain.dim; ++i) in >> ff.nodes_per_axis[i];
  expect_keyword(in, "origin");
  for (int i = 0; i < ff.domain.dim; ++i) in >> ff.domain.origin[i];
  expect_keyword(in, "extents");
  for (int i = 0; i < ff.domain.dim; ++i) in >> ff.domain.extents[i];

  expect_keyword(in, "levels");
  int levels = 0;
  in >> levels;
  if (levels < 2) throw Error("field_io", "need at least two levels");
  expect_keyword(in, "times");
  std::vector<double> times(levels);
  for (double& t : times) in >> t;
  expect_keyword(in, "jumps");
  int njump = 0;
  in >> njump;
  std::vector<int> jumps(njump);
  for (int& k : jumps) in >> k;
  expect_keyword(in, "values");
  int node_count = 0;
  in >> node_count;
  int expected = ff.nodes_per_axis[0] * (ff.domain.dim == 2 ? ff.nodes_per_axis[1] : 1);
  if (node_count != expected) throw Error("field_io", "node count does not match the mesh header");

  std::vector<std::uint8_t> mask(levels, 0);
  for (int k : jumps) {
    if (k <= 0 || k >= levels - 1) throw Error("field_io", "jump index out of range");
    mask[k] = 1;
  }
  SpaceTimeField field(TimePartition(std::move(times), std::move(mask)), node_count);
  for (int k = 0; k < field.partition().level_count(); ++k) {
    for (Side side : {Side::Left, Side::Right}) {
      auto& vals = field.values(k, side);
      for (int n = 0; n < node_count; ++n) {
        if (!(in >> vals[n])) throw Error("field_io", "truncated value table");
      }
      if (!field.partition().has_jump(k)) break;
    }
  }
  ff.field = std::move(field);
  return ff;
}

}  // namespace parabound
