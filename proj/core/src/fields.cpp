#include "parabound/fields.hpp"

#include <algorithm>
#include <cmath>

#include "parabound/quadrature.hpp"

namespace parabound {

SpaceTimeField::SpaceTimeField(TimePartition partition, int node_count)
    : part_(std::move(partition)), nodes_(node_count) {
  main_.assign(part_.level_count(), std::vector<double>(nodes_, 0.0));
  right_.assign(part_.level_count(), std::nullopt);
  for (int k = 0; k < part_.level_count(); ++k)
    if (part_.has_jump(k)) right_[k] = std::vector<double>(nodes_, 0.0);
}

std::vector<double>& SpaceTimeField::values(int level, Side side) {
  if (side == Side::Right && right_[level]) return *right_[level];
  return main_[level];
}

const std::vector<double>& SpaceTimeField::values(int level, Side side) const {
  if (side == Side::Right && right_[level]) return *right_[level];
  return main_[level];
}

void SpaceTimeField::mark_jump(int level) {
  part_.mark_jump(level);
  if (!right_[level]) right_[level] = main_[level];
}

std::vector<double> SpaceTimeField::at_slab_time(int s, double theta) const {
  const auto& a = slab_begin(s);
  const auto& b = slab_end(s);
  std::vector<double> out(nodes_);
  for (int n = 0; n < nodes_; ++n) out[n] = (1.0 - theta) * a[n] + theta * b[n];
  return out;
}

FluxField::FluxField(TimePartition partition, int node_count, int dim)
    : part_(std::move(partition)), nodes_(node_count), dim_(dim) {
  main_.assign(part_.level_count(),
               std::vector<std::vector<double>>(dim_, std::vector<double>(nodes_, 0.0)));
  right_.assign(part_.level_count(), std::nullopt);
  for (int k = 0; k < part_.level_count(); ++k)
    if (part_.has_jump(k)) right_[k] = main_[k];
}

std::vector<double>& FluxField::comp(int level, int d, Side side) {
  if (side == Side::Right && right_[level]) return (*right_[level])[d];
  return main_[level][d];
}

const std::vector<double>& FluxField::comp(int level, int d, Side side) const {
  if (side == Side::Right && right_[level]) return (*right_[level])[d];
  return main_[level][d];
}

void FluxField::mark_jump(int level) {
  part_.mark_jump(level);
  if (!right_[level]) right_[level] = main_[level];
}

FluxField FluxField::resampled_onto(const TimePartition& fine) const {
  FluxField out(fine, nodes_, dim_);
  int old_k = 0;
  for (int k = 0; k < fine.level_count(); ++k) {
    double t = fine.level(k);
    while (old_k + 1 < part_.level_count() && part_.level(old_k + 1) <= t) ++old_k;
    if (part_.level(old_k) == t) {
      for (int d = 0; d < dim_; ++d) {
        out.comp(k, d, Side::Left) = comp(old_k, d, Side::Left);
        if (fine.has_jump(k)) out.comp(k, d, Side::Right) = comp(old_k, d, Side::Right);
      }
    } else {
      // Interior of old slab old_k: exact linear interpolation.
      if (old_k + 1 >= part_.level_count())
        throw Error("fields", "resample target extends beyond the source partition");
      double t0 = part_.level(old_k), t1 = part_.level(old_k + 1);
      double theta = (t - t0) / (t1 - t0);
      for (int d = 0; d < dim_; ++d) {
        const auto& a = comp(old_k, d, Side::Right);
        const auto& b = comp(old_k + 1, d, Side::Left);
        auto& dst = out.comp(k, d, Side::Left);
        for (int n = 0; n < nodes_; ++n) dst[n] = (1.0 - theta) * a[n] + theta * b[n];
        if (fine.has_jump(k)) out.comp(k, d, Side::Right) = dst;
      }
    }
  }
  return out;
}

const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::Combined: return "combined";
    case NormKind::SliceT: return "slice_T";
    case NormKind::CombinedDelta: return "combined_delta";
    case NormKind::CombinedDeltaHat: return "combined_delta_hat";
    case NormKind::GeneralFunctional: return "general_functional";
  }
  return "?";
}

NormBundle NormBundle::from_squares(double grad2, double delta2, double sliceT2, double slice02,
                                    double l22) {
  NormBundle nb;
  nb.grad_QT = std::sqrt(grad2);
  nb.delta_QT = std::sqrt(delta2);
  nb.slice_T = std::sqrt(sliceT2);
  nb.slice_0 = std::sqrt(slice02);
  nb.l2_QT = std::sqrt(l22);
  nb.combined = std::sqrt(grad2 + 0.5 * sliceT2);
  nb.combined_delta = std::sqrt(grad2 + delta2 + sliceT2);
  nb.combined_delta_hat = std::sqrt(grad2 + delta2 + 0.5 * sliceT2);
  return nb;
}

double NormBundle::by_kind(NormKind k) const {
  switch (k) {
    case NormKind::Combined: return combined;
    case NormKind::SliceT: return slice_T;
    case NormKind::CombinedDelta: return combined_delta;
    case NormKind::CombinedDeltaHat: return combined_delta_hat;
    case NormKind::GeneralFunctional:
      throw Error("fields", "the general functional is not a NormBundle entry");
  }
  return 0.0;
}

std::vector<Vec> level_gradients(const SpaceTimeField& v, const SpaceMesh& mesh, int level,
                                 Side side) {
  if (v.node_count() != mesh.node_count()) throw Error("fields", "field/mesh size mismatch");
  const auto& nodal = v.values(level, side);
  std::vector<Vec> g(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c) g[c] = mesh.cell_gradient(nodal, c);
  return g;
}

std::vector<double> slab_rate(const SpaceTimeField& v, int s) {
  const auto& a = v.slab_begin(s);
  const auto& b = v.slab_end(s);
  double inv = 1.0 / v.partition().slab_length(s);
  std::vector<double> r(v.node_count());
  for (int n = 0; n < v.node_count(); ++n) r[n] = (b[n] - a[n]) * inv;
  return r;
}

std::vector<std::vector<double>> time_derivative(const SpaceTimeField& v) {
  std::vector<std::vector<double>> out;
  out.reserve(v.partition().slab_count());
  for (int s = 0; s < v.partition().slab_count(); ++s) out.push_back(slab_rate(v, s));
  return out;
}

std::vector<double> level_divergence(const FluxField& y, const SpaceMesh& mesh, int level,
                                     Side side) {
  if (y.node_count() != mesh.node_count()) throw Error("fields", "flux/mesh size mismatch");
  std::vector<double> div(mesh.cell_count(), 0.0);
  for (int d = 0; d < mesh.dim(); ++d) {
    const auto& nodal = y.comp(level, d, side);
    for (int c = 0; c < mesh.cell_count(); ++c) div[c] += mesh.cell_gradient(nodal, c)[d];
  }
  return div;
}

namespace {

struct SquareAccumulator {
  double grad2 = 0.0, l22 = 0.0;
};

// Space integrals of |grad e|^2 and e^2 for P1 nodal data at a fixed time.
SquareAccumulator space_squares(const std::vector<double>& nodal, const SpaceMesh& mesh) {
  SquareAccumulator acc;
  const double meas = mesh.cell_measure();
  for (int c = 0; c < mesh.cell_count(); ++c) {
    Vec g = mesh.cell_gradient(nodal, c);
    acc.grad2 += meas * dot(g, g);
    for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
      double val = mesh.eval(nodal, c, qp);
      acc.l22 += qp.weight * val * val;
    }
  }
  return acc;
}

}  // namespace

double slice_norm(const std::vector<double>& nodal, const SpaceMesh& mesh) {
  double s = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
      double val = mesh.eval(nodal, c, qp);
      s += qp.weight * val * val;
    }
  }
  return std::sqrt(s);
}

double slice_norm_against(const std::function<double(Vec)>& g, const std::vector<double>& nodal,
                          const SpaceMesh& mesh) {
  double s = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    Vec corner = mesh.cell_corner(c);
    for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
      Vec x = corner + qp.offset;
      double val = g(x) - mesh.eval(nodal, c, qp);
      s += qp.weight * val * val;
    }
  }
  return std::sqrt(s);
}

NormBundle norms(const SpaceTimeField& e, const SpaceMesh& mesh, const ConvectionClass& cls,
                 int time_quad) {
  if (e.node_count() != mesh.node_count()) throw Error("fields", "field/mesh size mismatch");
  QuadRule1D tq = gauss_legendre_01(time_quad);
  const double dsq = cls.div_zero() ? 0.0 : cls.delta_sq;

  double grad2 = 0.0, l22 = 0.0;
  for (int s = 0; s < e.partition().slab_count(); ++s) {
    double tau = e.partition().slab_length(s);
    for (int q = 0; q < tq.size(); ++q) {
      auto nodal = e.at_slab_time(s, tq.nodes[q]);
      SquareAccumulator acc = space_squares(nodal, mesh);
      grad2 += tau * tq.weights[q] * acc.grad2;
      l22 += tau * tq.weights[q] * acc.l22;
    }
  }
  double sliceT = slice_norm(e.values(e.partition().level_count() - 1, Side::Left), mesh);
  double slice0 = slice_norm(e.values(0, Side::Right), mesh);
  return NormBundle::from_squares(grad2, dsq * l22, sliceT * sliceT, slice0 * slice0, l22);
}

NormBundle norms_against(const SpaceTimeFn& u, const VectorFn& grad_u, const SpaceTimeField& v,
                         const SpaceMesh& mesh, const ConvectionClass& cls, int time_quad) {
  if (v.node_count() != mesh.node_count()) throw Error("fields", "field/mesh size mismatch");
  QuadRule1D tq = gauss_legendre_01(time_quad);
  const double dsq = cls.div_zero() ? 0.0 : cls.delta_sq;
  const double meas = mesh.cell_measure();
  (void)meas;

  double grad2 = 0.0, l22 = 0.0;
  std::vector<Vec> gcell(mesh.cell_count());
  for (int s = 0; s < v.partition().slab_count(); ++s) {
    double t0 = v.partition().level(s);
    double tau = v.partition().slab_length(s);
    for (int q = 0; q < tq.size(); ++q) {
      double theta = tq.nodes[q];
      double t = t0 + theta * tau;
      double wt = tau * tq.weights[q];
      auto nodal = v.at_slab_time(s, theta);
      for (int c = 0; c < mesh.cell_count(); ++c) gcell[c] = mesh.cell_gradient(nodal, c);
      for (int c = 0; c < mesh.cell_count(); ++c) {
        Vec corner = mesh.cell_corner(c);
        for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
          Vec x = corner + qp.offset;
          double ev = u(x, t) - mesh.eval(nodal, c, qp);
          Vec eg = grad_u(x, t) - gcell[c];
          grad2 += wt * qp.weight * dot(eg, eg);
          l22 += wt * qp.weight * ev * ev;
        }
      }
    }
  }

  const int last = v.partition().level_count() - 1;
  const double T = v.partition().horizon();
  double sliceT = slice_norm_against([&](Vec x) { return u(x, T); }, v.values(last, Side::Left), mesh);
  double slice0 = slice_norm_against([&](Vec x) { return u(x, 0.0); }, v.values(0, Side::Right), mesh);
  return NormBundle::from_squares(grad2, dsq * l22, sliceT * sliceT, slice0 * slice0, l22);
}

SpaceTimeField interpolate_field(const SpaceTimeFn& fn, const SpaceMesh& mesh,
                                 const TimePartition& partition, bool require_h10) {
  SpaceTimeField out(partition, mesh.node_count());
  double scale = 0.0;
  for (int k = 0; k < partition.level_count(); ++k) {
    double t = partition.level(k);
    auto& vals = out.values(k, Side::Left);
    for (int n = 0; n < mesh.node_count(); ++n) {
      vals[n] = fn(mesh.node_coord(n), t);
      scale = std::max(scale, std::abs(vals[n]));
    }
    if (partition.has_jump(k)) out.values(k, Side::Right) = vals;
  }
  if (require_h10) {
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (int k = 0; k < partition.level_count(); ++k) {
      auto& vals = out.values(k, Side::Left);
      for (int n = 0; n < mesh.node_count(); ++n) {
        if (!mesh.is_boundary(n)) continue;
        if (std::abs(vals[n]) > tol)
          throw Error("fields", "closed form '" + fn.name +
                                    "' does not vanish on the boundary; cannot interpolate into "
                                    "the H1_0-conforming field space");
        vals[n] = 0.0;
      }
      if (partition.has_jump(k)) out.values(k, Side::Right) = vals;
    }
  }
  return out;
}

double integrate_spacetime(const SpaceMesh& mesh, const TimePartition& partition, int time_quad,
                           const std::function<double(Vec, double)>& f) {
  QuadRule1D tq = gauss_legendre_01(time_quad);
  double acc = 0.0;
  for (int s = 0; s < partition.slab_count(); ++s) {
    double t0 = partition.level(s);
    double tau = partition.slab_length(s);
    for (int q = 0; q < tq.size(); ++q) {
      double t = t0 + tq.nodes[q] * tau;
      double wt = tau * tq.weights[q];
      for (int c = 0; c < mesh.cell_count(); ++c) {
        Vec corner = mesh.cell_corner(c);
        for (const auto& qp : mesh.quadrature(mesh.cell_class(c)))
          acc += wt * qp.weight * f(corner + qp.offset, t);
      }
    }
  }
  return acc;
}

double integrate_space(const SpaceMesh& mesh, const std::function<double(Vec)>& f) {
  double acc = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    Vec corner = mesh.cell_corner(c);
    for (const auto& qp : mesh.quadrature(mesh.cell_class(c)))
      acc += qp.weight * f(corner + qp.offset);
  }
  return acc;
}

DivRelCheck divrel_defect(const SpaceTimeField& w, const SpaceMesh& mesh, const ConvectionField& a,
                          int time_quad) {
  QuadRule1D tq = gauss_legendre_01(time_quad);
  const double diva = a.divergence();
  double conv_term = 0.0;  // int (a . grad w) w
  double div_term = 0.0;   // (1/2) int w^2 div a
  double conv_mag = 0.0, div_mag = 0.0;
  for (int s = 0; s < w.partition().slab_count(); ++s) {
    double tau = w.partition().slab_length(s);
    for (int q = 0; q < tq.size(); ++q) {
      double wt = tau * tq.weights[q];
      auto nodal = w.at_slab_time(s, tq.nodes[q]);
      for (int c = 0; c < mesh.cell_count(); ++c) {
        Vec g = mesh.cell_gradient(nodal, c);
        Vec corner = mesh.cell_corner(c);
        for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
          Vec x = corner + qp.offset;
          double val = mesh.eval(nodal, c, qp);
          double term = wt * qp.weight * dot(a.at(x), g) * val;
          conv_term += term;
          conv_mag += std::abs(term);
          double dterm = wt * qp.weight * 0.5 * val * val * diva;
          div_term += dterm;
          div_mag += std::abs(dterm);
        }
      }
    }
  }
  DivRelCheck out;
  out.defect = std::abs(conv_term + div_term);
  out.scale = std::max(conv_mag + div_mag, 1e-300);
  return out;
}

SpaceTimeField subtract(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.node_count() != b.node_count() || a.partition().levels() != b.partition().levels())
    throw Error("fields", "field subtraction requires a common partition");
  TimePartition part = a.partition();
  for (int k : b.partition().jump_levels()) part.mark_jump(k);
  SpaceTimeField out(part, a.node_count());
  for (int k = 0; k < part.level_count(); ++k) {
    for (Side side : {Side::Left, Side::Right}) {
      auto& dst = out.values(k, side);
      const auto& av = a.values(k, side);
      const auto& bv = b.values(k, side);
      for (int n = 0; n < a.node_count(); ++n) dst[n] = av[n] - bv[n];
      if (!part.has_jump(k)) break;
    }
  }
  return out;
}

bool boundary_zero(const SpaceTimeField& v, const SpaceMesh& mesh, double tol) {
  for (int k = 0; k < v.partition().level_count(); ++k) {
    for (Side side : {Side::Left, Side::Right}) {
      const auto& vals = v.values(k, side);
      for (int n = 0; n < mesh.node_count(); ++n)
        if (mesh.is_boundary(n) && std::abs(vals[n]) > tol) return false;
      if (!v.partition().has_jump(k)) break;
    }
  }
  return true;
}

}  // namespace parabound
