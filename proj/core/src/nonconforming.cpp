#include "parabound/nonconforming.hpp"

#include <algorithm>
#include <cmath>

namespace parabound {

SpaceTimeField project_conforming(const SpaceTimeField& vhat) {
  TimePartition flat(vhat.partition().levels(), {});
  SpaceTimeField out(flat, vhat.node_count());
  for (int k = 0; k < flat.level_count(); ++k) {
    auto& dst = out.values(k);
    if (vhat.partition().has_jump(k)) {
      const auto& l = vhat.values(k, Side::Left);
      const auto& r = vhat.values(k, Side::Right);
      for (int n = 0; n < vhat.node_count(); ++n) dst[n] = 0.5 * (l[n] + r[n]);
    } else {
      dst = vhat.values(k);
    }
  }
  return out;
}

namespace {

BoundKind conforming_kind(BoundKind kind, bool div_zero) {
  if (div_zero) {
    if (kind == BoundKind::CombinedDiv0 || kind == BoundKind::SimplifiedDiv0 ||
        kind == BoundKind::TerminalDiv0)
      return kind;
    throw Error("nonconforming", "class mismatch: requested a delta extraction for div a = 0");
  }
  switch (kind) {
    case BoundKind::TerminalDelta:
    case BoundKind::WeightedDelta:
    case BoundKind::SimplifiedDelta:
    case BoundKind::GeneralDelta:
    case BoundKind::CombinedDeltaHat: return kind;
    default:
      throw Error("nonconforming", "class mismatch: requested a div0 extraction for div a < 0");
  }
}

GreekParams params_or_default(const std::optional<GreekParams>& params, BoundKind kind,
                              int slabs) {
  if (params) return *params;
  return default_greeks(kind, slabs);
}

}  // namespace

CertifiedBound bound_method1(const SpaceTimeField& vhat, const FluxField& y,
                             const MajorantContext& ctx, BoundKind kind,
                             const std::optional<GreekParams>& params) {
  kind = conforming_kind(kind, ctx.cls.div_zero());
  if (kind == BoundKind::GeneralDelta)
    throw Error("nonconforming",
                "method 1 needs a norm extraction; the general functional is not a norm");
  SpaceTimeField proj = project_conforming(vhat);
  MajorantTable table = build_majorant_table(proj, y, ctx);
  GreekParams p = params_or_default(params, kind, table.slab_count);
  CertifiedBound inner = evaluate_bound(table, kind, p, 0.5 * table.ic_sq);

  SpaceTimeField diff = subtract(vhat, proj);
  double dist = 0.0;
  if (norm_of(kind) == NormKind::SliceT) {
    // No jump at t = T, so the projection distance at the final slice is 0;
    // keep the evaluation anyway for non-midpoint projections.
    dist = slice_norm(diff.values(diff.partition().level_count() - 1, Side::Left), ctx.mesh);
  } else {
    dist = norms(diff, ctx.mesh, ctx.cls, ctx.time_quad).by_kind(norm_of(kind));
  }

  CertifiedBound out = inner;
  out.value = dist + inner.value;
  out.components.nonconformity = dist;
  return out;
}

JumpPenalty jump_penalty(const SpaceTimeField& vhat, const FluxField& y,
                         const MajorantContext& ctx) {
  MajorantTable table = build_majorant_table(vhat, y, ctx);
  const BoundKind terminal_kind =
      ctx.cls.div_zero() ? BoundKind::TerminalDiv0 : BoundKind::TerminalDelta;
  GreekParams lambda1 = default_greeks(terminal_kind, table.slab_count);

  JumpPenalty jp;
  jp.total = 0.5 * table.ic_sq;
  for (int k : vhat.partition().jump_levels()) {
    CertifiedBound left = evaluate_bound(table, terminal_kind, lambda1, jp.total, k);
    const auto& vl = vhat.values(k, Side::Left);
    const auto& vr = vhat.values(k, Side::Right);
    std::vector<double> g(vhat.node_count());
    for (int n = 0; n < vhat.node_count(); ++n) g[n] = vr[n] - vl[n];
    double gn = slice_norm(g, ctx.mesh);
    jp.records.push_back({k, vhat.partition().level(k), gn, left});
    jp.total += gn * left.value + 0.5 * gn * gn;
  }
  return jp;
}

CertifiedBound bound_method2(const SpaceTimeField& vhat, const FluxField& y,
                             const MajorantContext& ctx, BoundKind kind,
                             const std::optional<GreekParams>& params) {
  kind = conforming_kind(kind, ctx.cls.div_zero());
  MajorantTable table = build_majorant_table(vhat, y, ctx);
  JumpPenalty jp = jump_penalty(vhat, y, ctx);
  GreekParams p = params_or_default(params, kind, table.slab_count);
  return evaluate_bound(table, kind, p, jp.total);
}

SpaceTimeField epsilon_regularize(const SpaceTimeField& vhat, double eps) {
  auto jumps = vhat.partition().jump_levels();
  if (jumps.empty()) return vhat;
  if (!(eps > 0.0)) throw Error("nonconforming", "eps must be positive");
  for (int k : jumps) {
    double left = vhat.partition().slab_length(k - 1);
    double right = vhat.partition().slab_length(k);
    if (!(eps < std::min(left, right)))
      throw Error("nonconforming", "eps must be smaller than the slabs adjacent to every jump");
  }

  std::vector<double> levels;
  std::vector<std::vector<double>> values;
  const TimePartition& part = vhat.partition();
  for (int k = 0; k < part.level_count(); ++k) {
    if (part.has_jump(k)) {
      double tau = part.level(k);
      double t0 = part.level(k - 1);
      double theta = (tau - eps - t0) / (tau - t0);
      levels.push_back(tau - eps);
      values.push_back(vhat.at_slab_time(k - 1, theta));
      levels.push_back(tau);
      values.push_back(vhat.values(k, Side::Right));
    } else {
      levels.push_back(part.level(k));
      values.push_back(vhat.values(k, Side::Left));
    }
  }
  SpaceTimeField out(TimePartition(std::move(levels), {}), vhat.node_count());
  for (std::size_t k = 0; k < values.size(); ++k) out.values(static_cast<int>(k)) = values[k];
  return out;
}

namespace {

// Interior bump vanishing on the boundary; sin-shaped per axis.
std::vector<double> bump_shape(const SpaceMesh& mesh) {
  std::vector<double> s(mesh.node_count());
  const Domain& d = mesh.domain();
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (mesh.is_boundary(n)) {
      s[n] = 0.0;
      continue;
    }
    Vec x = mesh.node_coord(n);
    double val = std::sin(M_PI * (x[0] - d.origin[0]) / d.extents[0]);
    if (d.dim == 2) val *= std::sin(M_PI * (x[1] - d.origin[1]) / d.extents[1]);
    s[n] = val;
  }
  return s;
}

// Interpolate onto the every-other-node coarse grid and prolong back; the
// identity on coarse-representable P1 data, lossy otherwise.
std::vector<double> coarsen_prolong(const SpaceMesh& mesh, const std::vector<double>& fine) {
  auto n = mesh.nodes_per_axis();
  if ((n[0] - 1) % 2 != 0 || (mesh.dim() == 2 && (n[1] - 1) % 2 != 0))
    throw Error("nonconforming", "restart-interp jump needs an odd node count per axis");
  std::vector<double> out(fine.size());
  if (mesh.dim() == 1) {
    for (int i = 0; i < n[0]; ++i) {
      if (i % 2 == 0)
        out[i] = fine[i];
      else
        out[i] = 0.5 * (fine[i - 1] + fine[i + 1]);
    }
    return out;
  }
  for (int j = 0; j < n[1]; ++j) {
    for (int i = 0; i < n[0]; ++i) {
      int id = mesh.node_index(i, j);
      bool ei = i % 2 == 0, ej = j % 2 == 0;
      if (ei && ej) {
        out[id] = fine[id];
      } else if (!ei && ej) {
        out[id] = 0.5 * (fine[mesh.node_index(i - 1, j)] + fine[mesh.node_index(i + 1, j)]);
      } else if (ei && !ej) {
        out[id] = 0.5 * (fine[mesh.node_index(i, j - 1)] + fine[mesh.node_index(i, j + 1)]);
      } else {
        // Center of a coarse cell: interpolate along the coarse diagonal,
        // consistent with the lower-left/upper-right triangle split.
        out[id] = 0.5 * (fine[mesh.node_index(i - 1, j - 1)] + fine[mesh.node_index(i + 1, j + 1)]);
      }
    }
  }
  return out;
}

}  // namespace

SpaceTimeField solve_with_jumps(const ProblemSpec& spec, const SpaceMesh& mesh,
                                const TimePartition& partition, ConvectionDisc disc,
                                const std::vector<JumpInjection>& jumps) {
  TimePartition part = partition;
  std::vector<std::pair<int, JumpInjection>> plan;
  for (const auto& j : jumps) {
    int level = part.find_level(j.time, 1e-9 * part.horizon());
    if (level < 0)
      throw Error("nonconforming",
                  "jump time " + std::to_string(j.time) + " is not a partition level");
    part.mark_jump(level);  // rejects t = 0 and t = T
    plan.emplace_back(level, j);
  }
  std::sort(plan.begin(), plan.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  SpaceTimeField v(part, mesh.node_count());
  ImplicitEulerStepper stepper(spec, mesh, part, disc);
  v.values(0, Side::Left) = stepper.state();
  for (int s = 0; s < part.slab_count(); ++s) {
    stepper.advance(s);
    v.values(s + 1, Side::Left) = stepper.state();
    auto it = std::find_if(plan.begin(), plan.end(),
                           [s](const auto& p) { return p.first == s + 1; });
    if (it == plan.end()) continue;
    std::vector<double> state = stepper.state();
    if (it->second.kind == JumpInjection::Kind::Bump) {
      std::vector<double> shape = bump_shape(mesh);
      for (int n = 0; n < mesh.node_count(); ++n) state[n] += it->second.amplitude * shape[n];
    } else {
      state = coarsen_prolong(mesh, state);
    }
    v.values(s + 1, Side::Right) = state;
    stepper.set_state(std::move(state));
  }
  return v;
}

}  // namespace parabound
