#include "parabound/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parabound/quadrature.hpp"

namespace parabound {

MajorantContext MajorantContext::make(const ProblemSpec& spec, const SpaceMesh& mesh,
                                      int time_quad) {
  MajorantContext ctx{spec, mesh, classify_convection(spec.convection, spec.domain),
                      friedrichs_constant(spec.domain), time_quad};
  return ctx;
}

LambdaSpec LambdaSpec::auto_() { return LambdaSpec{Mode::Auto, {}}; }
LambdaSpec LambdaSpec::one() { return LambdaSpec{Mode::One, {}}; }
LambdaSpec LambdaSpec::zero() { return LambdaSpec{Mode::Zero, {}}; }

GreekParams GreekParams::constant(int slabs, double a, double b, double g, LambdaSpec lam) {
  GreekParams p;
  p.alpha.assign(slabs, a);
  p.beta.assign(slabs, b);
  p.gamma.assign(slabs, g);
  p.lambda = std::move(lam);
  return p;
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::CombinedDiv0: return "combined_div0";
    case BoundKind::SimplifiedDiv0: return "simplified_div0";
    case BoundKind::TerminalDiv0: return "terminal_div0";
    case BoundKind::GeneralDelta: return "general_delta";
    case BoundKind::TerminalDelta: return "terminal_delta";
    case BoundKind::WeightedDelta: return "weighted_delta";
    case BoundKind::SimplifiedDelta: return "simplified_delta";
    case BoundKind::CombinedDeltaHat: return "combined_delta_hat";
  }
  return "?";
}

NormKind norm_of(BoundKind k) {
  switch (k) {
    case BoundKind::CombinedDiv0:
    case BoundKind::SimplifiedDiv0: return NormKind::Combined;
    case BoundKind::TerminalDiv0:
    case BoundKind::TerminalDelta: return NormKind::SliceT;
    case BoundKind::WeightedDelta:
    case BoundKind::SimplifiedDelta: return NormKind::CombinedDelta;
    case BoundKind::CombinedDeltaHat: return NormKind::CombinedDeltaHat;
    case BoundKind::GeneralDelta: return NormKind::GeneralFunctional;
  }
  return NormKind::Combined;
}

double recompute_value(BoundKind kind, const MajorantTerms& t) {
  switch (kind) {
    case BoundKind::CombinedDiv0:
    case BoundKind::SimplifiedDiv0: {
      double M = std::sqrt(t.gap_sq) + t.c_f * std::sqrt(t.resid_sq);
      if (t.jump_term == 0.0) return M;
      return 0.5 * (M + std::sqrt(M * M + 4.0 * t.jump_term));
    }
    case BoundKind::TerminalDiv0:
      return std::sqrt(t.c_f * t.c_f * t.resid_sq + t.gap_sq + 2.0 * t.jump_term);
    case BoundKind::TerminalDelta:
      return std::sqrt(2.0 * (t.resid_delta_term + t.resid_fried_term + t.flux_term) +
                       2.0 * t.jump_term);
    case BoundKind::WeightedDelta:
    case BoundKind::SimplifiedDelta:
      return std::sqrt(
          (t.resid_delta_term + t.resid_fried_term + t.flux_term + t.jump_term) / t.min_coeff);
    case BoundKind::GeneralDelta:
      return t.resid_delta_term + t.resid_fried_term + t.flux_term + t.jump_term;
    case BoundKind::CombinedDeltaHat: {
      double M = std::sqrt(t.gap_sq) + t.c_f * std::sqrt(t.resid_sq);
      if (t.jump_term == 0.0) return M;
      return 0.5 * (M + std::sqrt(M * M + 4.0 * t.jump_term));
    }
  }
  return 0.0;
}

MajorantTable build_majorant_table(const SpaceTimeField& v, const FluxField& y,
                                   const MajorantContext& ctx) {
  const SpaceMesh& mesh = ctx.mesh;
  if (v.node_count() != mesh.node_count() || y.node_count() != mesh.node_count())
    throw Error("majorant", "field/mesh size mismatch");
  if (v.partition().levels() != y.partition().levels())
    throw Error("majorant", "v and y must share the time partition");

  MajorantTable table;
  table.c_f = ctx.c_f;
  table.delta_sq = ctx.cls.div_zero() ? 0.0 : ctx.cls.delta_sq;
  table.slab_count = v.partition().slab_count();
  table.cell_count = mesh.cell_count();
  table.resid_sq_cell.assign(table.slab_count, std::vector<double>(table.cell_count, 0.0));
  table.resid_sq.assign(table.slab_count, 0.0);
  table.gap_sq.assign(table.slab_count, 0.0);

  QuadRule1D tq = gauss_legendre_01(ctx.time_quad);
  const int dim = mesh.dim();
  std::vector<Vec> grad_v(mesh.cell_count());
  std::vector<double> div_y(mesh.cell_count());
  std::vector<std::vector<double>> ynodal(dim);

  for (int s = 0; s < table.slab_count; ++s) {
    const double t0 = v.partition().level(s);
    const double tau = v.partition().slab_length(s);
    const std::vector<double> vt = slab_rate(v, s);
    for (int q = 0; q < tq.size(); ++q) {
      const double theta = tq.nodes[q];
      const double t = t0 + theta * tau;
      const double wt = tau * tq.weights[q];
      std::vector<double> vnodal = v.at_slab_time(s, theta);
      for (int d = 0; d < dim; ++d) {
        const auto& a = y.comp(s, d, Side::Right);
        const auto& b = y.comp(s + 1, d, Side::Left);
        ynodal[d].resize(mesh.node_count());
        for (int n = 0; n < mesh.node_count(); ++n)
          ynodal[d][n] = (1.0 - theta) * a[n] + theta * b[n];
      }
      for (int c = 0; c < mesh.cell_count(); ++c) {
        grad_v[c] = mesh.cell_gradient(vnodal, c);
        double dv = 0.0;
        for (int d = 0; d < dim; ++d) dv += mesh.cell_gradient(ynodal[d], c)[d];
        div_y[c] = dv;
      }
      for (int c = 0; c < mesh.cell_count(); ++c) {
        Vec corner = mesh.cell_corner(c);
        double cell_r = 0.0, cell_gap = 0.0;
        for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
          Vec x = corner + qp.offset;
          double vt_q = mesh.eval(vt, c, qp);
          Vec y_q{mesh.eval(ynodal[0], c, qp), dim == 2 ? mesh.eval(ynodal[1], c, qp) : 0.0};
          double r = ctx.spec.source_f(x, t) - vt_q - dot(ctx.spec.convection.at(x), grad_v[c]) +
                     div_y[c];
          cell_r += qp.weight * r * r;
          Vec gap = y_q - grad_v[c];
          cell_gap += qp.weight * dot(gap, gap);
        }
        table.resid_sq_cell[s][c] += wt * cell_r;
        table.gap_sq[s] += wt * cell_gap;
      }
    }
    double total = 0.0;
    for (double rc : table.resid_sq_cell[s]) total += rc;
    table.resid_sq[s] = total;
  }

  if (ctx.spec.initial_phi) {
    table.ic = slice_norm_against([&](Vec x) { return ctx.spec.initial_phi(x); },
                                  v.values(0, Side::Right), mesh);
    table.ic_sq = table.ic * table.ic;
  }
  return table;
}

double lambda_optimal(double delta_sq, double alpha, double gamma, double c_f) {
  if (!(alpha > 0.0) || !(gamma > 0.0))
    throw Error("majorant", "lambda_optimal requires alpha, gamma > 0");
  if (delta_sq <= 0.0) return 0.0;  // A -> infinity
  double A = 1.0 / (4.0 * alpha * delta_sq);
  double B = c_f * c_f / (2.0 * gamma);
  return B / (A + B);
}

std::vector<double> lambda_optimal(const std::vector<double>& delta_sq, double alpha, double gamma,
                                   double c_f) {
  std::vector<double> out(delta_sq.size());
  for (std::size_t i = 0; i < delta_sq.size(); ++i)
    out[i] = lambda_optimal(delta_sq[i], alpha, gamma, c_f);
  return out;
}

namespace {

bool is_delta_kind(BoundKind k) {
  return k == BoundKind::GeneralDelta || k == BoundKind::TerminalDelta ||
         k == BoundKind::WeightedDelta || k == BoundKind::SimplifiedDelta;
}

void check_params(const GreekParams& p, BoundKind kind, int slabs) {
  if (static_cast<int>(p.alpha.size()) < slabs || static_cast<int>(p.beta.size()) < slabs ||
      static_cast<int>(p.gamma.size()) < slabs)
    throw Error("majorant", "GreekParams must cover every slab");
  for (int s = 0; s < slabs; ++s) {
    double a = p.alpha[s], b = p.beta[s], g = p.gamma[s];
    if (!(a > 0.0) || !(b > 0.0) || !(g > 0.0))
      throw Error("majorant", "alpha, beta, gamma must be positive (slab " + std::to_string(s) + ")");
    if (kind == BoundKind::TerminalDelta || kind == BoundKind::TerminalDiv0) {
      if (a > 1.0 || b > 1.0 || g > 1.0)
        throw Error("majorant", "terminal bound admits parameters in (0, 1] only");
    } else if (kind == BoundKind::SimplifiedDelta) {
      if (!(1.0 - a > 0.0) || !(2.0 - b > 0.0))
        throw Error("majorant",
                    "strict-mode violation: need 1 - alpha > 0 and 2 - beta > 0 (slab " +
                        std::to_string(s) + ")");
    } else if (is_delta_kind(kind)) {
      if (!(1.0 - a > 0.0) || !(2.0 - b - g > 0.0))
        throw Error("majorant",
                    "strict-mode violation: need 1 - alpha > 0 and 2 - beta - gamma > 0 (slab " +
                        std::to_string(s) + ")");
    }
  }
}

// Per-slab uniform lambda for the non-Explicit modes.
double resolve_lambda_uniform(const LambdaSpec& lam, double delta_sq, double alpha, double gamma,
                              double c_f, BoundKind kind) {
  if (kind == BoundKind::SimplifiedDelta) {
    if (lam.mode == LambdaSpec::Mode::Zero)
      throw Error("majorant", "the simplified estimate requires lambda = 1");
    return 1.0;
  }
  switch (lam.mode) {
    case LambdaSpec::Mode::One: return 1.0;
    case LambdaSpec::Mode::Zero: return 0.0;
    case LambdaSpec::Mode::Auto: return lambda_optimal(delta_sq, alpha, gamma, c_f);
    case LambdaSpec::Mode::Explicit: return -1.0;  // handled per cell
  }
  return 0.0;
}

}  // namespace

CertifiedBound evaluate_bound(const MajorantTable& table, BoundKind kind,
                              const GreekParams& params, double jump_term, int slab_end) {
  const int S = slab_end < 0 ? table.slab_count : slab_end;
  CertifiedBound out;
  out.kind = kind;
  out.params = params;
  out.terms.c_f = table.c_f;
  out.terms.ic_sq = table.ic_sq;
  out.terms.jump_term = jump_term;

  double gap = 0.0, resid = 0.0;
  for (int s = 0; s < S; ++s) {
    gap += table.gap_sq[s];
    resid += table.resid_sq[s];
  }
  out.terms.gap_sq = gap;
  out.terms.resid_sq = resid;

  if (kind == BoundKind::CombinedDiv0 || kind == BoundKind::SimplifiedDiv0 ||
      kind == BoundKind::TerminalDiv0 || kind == BoundKind::CombinedDeltaHat) {
    if (kind == BoundKind::CombinedDiv0 && jump_term == 0.0) out.kind = BoundKind::SimplifiedDiv0;
    if (kind == BoundKind::SimplifiedDiv0 && jump_term != 0.0) out.kind = BoundKind::CombinedDiv0;
    out.components.flux_gap = std::sqrt(gap);
    out.components.residual_free = table.c_f * std::sqrt(resid);
  } else {
    check_params(params, kind, S);
    const bool simplified = kind == BoundKind::SimplifiedDelta;
    double min_coeff = 0.5;
    double rd = 0.0, rf = 0.0, fx = 0.0;
    for (int s = 0; s < S; ++s) {
      const double a = params.alpha[s], b = params.beta[s], g = params.gamma[s];
      double i1w = 0.0, i2w = 0.0;
      if (params.lambda.mode == LambdaSpec::Mode::Explicit) {
        if (static_cast<int>(params.lambda.values.size()) < S)
          throw Error("majorant", "explicit lambda must cover every slab");
        const auto& lam_cells = params.lambda.values[s];
        if (static_cast<int>(lam_cells.size()) != table.cell_count)
          throw Error("majorant", "explicit lambda must cover every cell");
        for (int c = 0; c < table.cell_count; ++c) {
          double l = lam_cells[c];
          if (l < 0.0 || l > 1.0) throw Error("majorant", "lambda values must lie in [0, 1]");
          // (lambda/delta) r is defined as 0 wherever lambda = 0.
          if (l > 0.0) {
            if (table.delta_sq <= 0.0) throw Error("majorant", "division by vanishing delta");
            i1w += l * l / table.delta_sq * table.resid_sq_cell[s][c];
          }
          i2w += (1.0 - l) * (1.0 - l) * table.resid_sq_cell[s][c];
        }
      } else {
        double l = resolve_lambda_uniform(params.lambda, table.delta_sq, a, g, table.c_f, kind);
        if (l > 0.0 && table.delta_sq <= 0.0)
          throw Error("majorant", "division by vanishing delta");
        if (l > 0.0) i1w = l * l / table.delta_sq * table.resid_sq[s];
        i2w = (1.0 - l) * (1.0 - l) * table.resid_sq[s];
      }
      rd += 1.0 / (4.0 * a) * i1w;
      rf += table.c_f * table.c_f / (2.0 * g) * i2w;
      fx += 1.0 / (2.0 * b) * table.gap_sq[s];
      double c1 = simplified ? 1.0 - 0.5 * b : 1.0 - 0.5 * b - 0.5 * g;
      double c2 = 1.0 - a;
      min_coeff = std::min(min_coeff, std::min(c1, c2));
      if (kind == BoundKind::GeneralDelta) {
        out.lhs_grad_coeff.push_back(c1);
        out.lhs_delta_coeff.push_back(c2);
      }
    }
    out.terms.resid_delta_term = rd;
    out.terms.resid_fried_term = rf;
    out.terms.flux_term = fx;
    out.terms.min_coeff = min_coeff;
    out.components.flux_gap = std::sqrt(gap);
    out.components.residual_free = std::sqrt(rd + rf);
  }

  out.components.ic_mismatch = table.ic;
  out.components.jump_penalty = jump_term - 0.5 * table.ic_sq;
  out.norm_bounded = norm_of(out.kind);
  out.value = recompute_value(out.kind, out.terms);
  return out;
}

double Residual::norm() const { return std::sqrt(total_sq); }

Residual residual(const SpaceTimeField& v, const FluxField& y, const MajorantContext& ctx) {
  if (!v.conforming())
    throw Error("majorant",
                "residual of a jump-marked approximation; use the nonconforming bounds");
  MajorantTable table = build_majorant_table(v, y, ctx);
  Residual r;
  r.cell_sq = std::move(table.resid_sq_cell);
  r.slab_sq = std::move(table.resid_sq);
  for (double s : r.slab_sq) r.total_sq += s;
  return r;
}

CertifiedBound majorant_div0(const SpaceTimeField& v, const FluxField& y,
                             const MajorantContext& ctx) {
  if (!ctx.cls.div_zero()) throw Error("majorant", "majorant_div0 requires the div a = 0 class");
  if (!v.conforming())
    throw Error("majorant", "conforming bound on a jump-marked approximation");
  MajorantTable table = build_majorant_table(v, y, ctx);
  return evaluate_bound(table, BoundKind::CombinedDiv0, {}, 0.5 * table.ic_sq);
}

CertifiedBound terminal_div0(const SpaceTimeField& v, const FluxField& y,
                             const MajorantContext& ctx) {
  if (!ctx.cls.div_zero()) throw Error("majorant", "terminal_div0 requires the div a = 0 class");
  if (!v.conforming())
    throw Error("majorant", "conforming bound on a jump-marked approximation");
  MajorantTable table = build_majorant_table(v, y, ctx);
  return evaluate_bound(table, BoundKind::TerminalDiv0, {}, 0.5 * table.ic_sq);
}

CertifiedBound majorant_delta(const SpaceTimeField& v, const FluxField& y,
                              const MajorantContext& ctx, const GreekParams& params,
                              BoundKind kind) {
  if (ctx.cls.div_zero())
    throw Error("majorant", "class mismatch: the weighted bounds require div a < 0");
  if (!is_delta_kind(kind))
    throw Error("majorant", "majorant_delta expects a delta-case extraction");
  if (!v.conforming())
    throw Error("majorant", "conforming bound on a jump-marked approximation");
  MajorantTable table = build_majorant_table(v, y, ctx);
  return evaluate_bound(table, kind, params, 0.5 * table.ic_sq);
}

GreekParams default_greeks(BoundKind kind, int slabs) {
  switch (kind) {
    case BoundKind::TerminalDelta:
    case BoundKind::TerminalDiv0:
      return GreekParams::constant(slabs, 1.0, 1.0, 1.0, LambdaSpec::auto_());
    case BoundKind::SimplifiedDelta:
      return GreekParams::constant(slabs, 0.5, 1.0, 1.0, LambdaSpec::one());
    default:
      return GreekParams::constant(slabs, 0.5, 0.5, 0.5, LambdaSpec::auto_());
  }
}

GreekParams optimize_greeks(const MajorantTable& table, BoundKind kind,
                            LambdaSpec::Mode lambda_mode) {
  if (!is_delta_kind(kind)) throw Error("majorant", "greek optimization targets the delta bounds");
  if (lambda_mode == LambdaSpec::Mode::Explicit)
    throw Error("majorant", "greek optimization does not accept explicit lambda");
  const bool terminal = kind == BoundKind::TerminalDelta;
  const bool simplified = kind == BoundKind::SimplifiedDelta;
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);

  GreekParams best;
  LambdaSpec lam;
  lam.mode = lambda_mode;
  best.lambda = lam;
  best.alpha.resize(table.slab_count);
  best.beta.resize(table.slab_count);
  best.gamma.resize(table.slab_count);

  for (int s = 0; s < table.slab_count; ++s) {
    double best_obj = std::numeric_limits<double>::infinity();
    double ba = grid[0], bb = grid[0], bg = grid[0];
    for (double a : grid) {
      // Norm extractions keep the LHS coefficients at or above the default
      // 1/2, so per-slab minimization is exact and the default is dominated.
      if (!terminal && a > 0.5 + 1e-12) continue;
      for (double b : grid) {
        if (simplified && b > 1.0 + 1e-12) continue;
        for (double g : grid) {
          if (!terminal && !simplified && b + g > 1.0 + 1e-12) continue;
          double l = simplified
                         ? 1.0
                         : (lambda_mode == LambdaSpec::Mode::One
                                ? 1.0
                                : (lambda_mode == LambdaSpec::Mode::Zero
                                       ? 0.0
                                       : lambda_optimal(table.delta_sq, a, g, table.c_f)));
          double i1w = l > 0.0 ? l * l / table.delta_sq * table.resid_sq[s] : 0.0;
          double i2w = (1.0 - l) * (1.0 - l) * table.resid_sq[s];
          double obj = 1.0 / (4.0 * a) * i1w + table.c_f * table.c_f / (2.0 * g) * i2w +
                       1.0 / (2.0 * b) * table.gap_sq[s];
          if (obj < best_obj) {
            best_obj = obj;
            ba = a;
            bb = b;
            bg = g;
          }
          if (simplified) break;  // gamma plays no role when lambda == 1
        }
      }
    }
    best.alpha[s] = ba;
    best.beta[s] = bb;
    best.gamma[s] = simplified ? 1.0 : bg;
  }
  return best;
}

GreekParams optimize_greeks(const SpaceTimeField& v, const FluxField& y,
                            const MajorantContext& ctx, BoundKind kind) {
  if (ctx.cls.div_zero())
    throw Error("majorant", "class mismatch: greek optimization requires div a < 0");
  MajorantTable table = build_majorant_table(v, y, ctx);
  return optimize_greeks(table, kind, LambdaSpec::Mode::Auto);
}

}  // namespace parabound
