#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parabound/fields.hpp"
#include "parabound/mesh.hpp"
#include "parabound/problem.hpp"

namespace parabound {

/// Everything the bound evaluations need besides the fields themselves.
struct MajorantContext {
  const ProblemSpec& spec;
  const SpaceMesh& mesh;
  ConvectionClass cls;
  double c_f = 0.0;
  int time_quad = 4;

  static MajorantContext make(const ProblemSpec& spec, const SpaceMesh& mesh, int time_quad = 4);
};

/// Residual split function lambda(x,t) with values in [0,1], stored per
/// slab per cell. Auto resolves to the pointwise optimizer for the active
/// (alpha, gamma) pair.
struct LambdaSpec {
  enum class Mode { Auto, One, Zero, Explicit };
  Mode mode = Mode::Auto;
  std::vector<std::vector<double>> values;  // [slab][cell], Explicit only

  static LambdaSpec auto_();
  static LambdaSpec one();
  static LambdaSpec zero();
};

/// Piecewise-constant-per-slab Young parameters of the weighted estimates.
/// Strict mode (norm extractions) requires 1 - alpha > 0 and
/// 2 - beta - gamma > 0 on every slab; the boundary values alpha = beta =
/// gamma = 1 are admitted for the terminal-slice bound only.
struct GreekParams {
  std::vector<double> alpha, beta, gamma;  // per slab
  LambdaSpec lambda;

  static GreekParams constant(int slabs, double a, double b, double g,
                              LambdaSpec lam = LambdaSpec::auto_());
};

enum class BoundKind {
  CombinedDiv0,      // |||e|||      <= (M + sqrt(M^2 + 2 ic^2)) / 2
  SimplifiedDiv0,    // |||e|||      <= M                      (exact IC)
  TerminalDiv0,      // ||e(.,T)||   <= M_T
  GeneralDelta,      // coefficient-weighted functional <= RHS
  TerminalDelta,     // ||e(.,T)||   <= N_T
  WeightedDelta,     // |||e|||_d    (delta-weighted space-time norm)
  SimplifiedDelta,   // |||e|||_d    with lambda == 1
  CombinedDeltaHat,  // |||e|||_dhat (time-jump form of the delta case)
};

const char* to_string(BoundKind k);
NormKind norm_of(BoundKind k);

/// Reporting breakdown. jump_penalty holds the jump-only part of C_J / D_J,
/// zero for conforming approximations; the initial mismatch is reported
/// separately in ic_mismatch.
struct BoundComponents {
  double flux_gap = 0.0;       // ||y - grad v||_{Q_T}
  double residual_free = 0.0;  // C_F ||r|| or the weighted lambda-split total
  double ic_mismatch = 0.0;    // ||v(.,0) - phi||
  double jump_penalty = 0.0;
  double nonconformity = 0.0;  // Method 1 projection distance
};

/// Raw aggregates a bound is computed from; enough to recompute the value,
/// which keeps the formulas testable (e.g. for monotonicity checks).
struct MajorantTerms {
  double gap_sq = 0.0;            // ||y - grad v||^2 over the active slabs
  double resid_sq = 0.0;          // ||r||^2
  double resid_delta_term = 0.0;  // sum_s (1/4 alpha) ||(lambda/delta) r||^2
  double resid_fried_term = 0.0;  // sum_s (C_F^2/2 gamma) ||(1-lambda) r||^2
  double flux_term = 0.0;         // sum_s (1/2 beta) ||y - grad v||^2
  double ic_sq = 0.0;
  double jump_term = 0.0;   // C_J / D_J accumulator; = ic_sq/2 when no jumps
  double min_coeff = 0.5;   // m* of the delta extractions
  double c_f = 0.0;
};

double recompute_value(BoundKind kind, const MajorantTerms& t);

struct CertifiedBound {
  BoundKind kind = BoundKind::CombinedDiv0;
  NormKind norm_bounded = NormKind::Combined;
  double value = 0.0;
  BoundComponents components;
  GreekParams params;
  MajorantTerms terms;
  // LHS coefficient record of the general estimate (GeneralDelta only).
  std::vector<double> lhs_grad_coeff, lhs_delta_coeff;
};

/// Exact per-slab integrals shared by all bounds of one (v, y) pair.
/// Slab prefixes of these integrals give the truncated-cylinder bounds the
/// jump penalties are built from.
struct MajorantTable {
  std::vector<std::vector<double>> resid_sq_cell;  // [slab][cell]
  std::vector<double> resid_sq;                    // per slab
  std::vector<double> gap_sq;                      // per slab
  double ic = 0.0;
  double ic_sq = 0.0;
  double c_f = 0.0;
  double delta_sq = 0.0;
  int slab_count = 0;
  int cell_count = 0;
};

MajorantTable build_majorant_table(const SpaceTimeField& v, const FluxField& y,
                                   const MajorantContext& ctx);

/// Single bound evaluator; every conforming and nonconforming estimate goes
/// through here so that reductions between them are exact. `jump_term` is
/// the C_J / D_J accumulator (ic_sq/2 for conforming approximations);
/// `slab_end` < 0 means all slabs, otherwise the first `slab_end` slabs
/// (truncated cylinder (0, t_k)).
CertifiedBound evaluate_bound(const MajorantTable& table, BoundKind kind,
                              const GreekParams& params, double jump_term, int slab_end = -1);

/// Residual r(v, y) = f - v_t - a . grad v + Div y and its exact L2(Q_T)
/// accounting, per slab and cell (the cell table doubles as a local error
/// indicator export). Rejects jump-marked v; the nonconforming module
/// handles those.
struct Residual {
  std::vector<std::vector<double>> cell_sq;  // [slab][cell] int r^2
  std::vector<double> slab_sq;
  double total_sq = 0.0;
  double norm() const;
};
Residual residual(const SpaceTimeField& v, const FluxField& y, const MajorantContext& ctx);

/// Upper bound for |||e||| in the div a = 0 case; collapses to the simple
/// form M_{Q_T} when the initial condition is exact.
CertifiedBound majorant_div0(const SpaceTimeField& v, const FluxField& y,
                             const MajorantContext& ctx);

/// Terminal-slice bound ||e(.,T)|| <= M_T in the div a = 0 case.
CertifiedBound terminal_div0(const SpaceTimeField& v, const FluxField& y,
                             const MajorantContext& ctx);

/// Pointwise minimizer of q(l) = A l^2 + B (1-l)^2 with A = 1/(4 alpha d^2),
/// B = C_F^2/(2 gamma): l* = B / (A + B); 0 at d = 0 by continuity.
double lambda_optimal(double delta_sq, double alpha, double gamma, double c_f);
std::vector<double> lambda_optimal(const std::vector<double>& delta_sq, double alpha, double gamma,
                                   double c_f);

/// Weighted bounds of the div a < 0 case. `kind` selects the extraction:
/// TerminalDelta, WeightedDelta, SimplifiedDelta or GeneralDelta.
CertifiedBound majorant_delta(const SpaceTimeField& v, const FluxField& y,
                              const MajorantContext& ctx, const GreekParams& params,
                              BoundKind kind);

/// Default parameters per extraction: alpha = beta = gamma = 1 for the
/// terminal bound, 1/2 otherwise; lambda auto (forced to one for
/// SimplifiedDelta).
GreekParams default_greeks(BoundKind kind, int slabs);

/// Per-slab grid search over the Young parameters minimizing the requested
/// bound, with lambda = lambda_optimal at each candidate. The candidate set
/// keeps the extraction's LHS coefficients at or above the default's, so the
/// result never exceeds the alpha = beta = gamma = 1/2 default bound.
/// Deterministic tie-break: smallest alpha, then beta, then gamma.
GreekParams optimize_greeks(const SpaceTimeField& v, const FluxField& y,
                            const MajorantContext& ctx, BoundKind kind);
GreekParams optimize_greeks(const MajorantTable& table, BoundKind kind, LambdaSpec::Mode lambda_mode);

}  // namespace parabound
