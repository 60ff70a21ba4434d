#pragma once

#include <optional>
#include <vector>

#include "parabound/majorant.hpp"
#include "parabound/solver.hpp"

namespace parabound {

/// One time discontinuity: its location, the jump norm ||v+ - v-|| and the
/// terminal-slice bound on (0, tau) that prices the left-limit error.
struct JumpRecord {
  int level = 0;
  double tau = 0.0;
  double jump_norm = 0.0;
  CertifiedBound left_bound;
};

/// Accumulated jump penalty (the C_J / D_J of the estimates; includes the
/// ic^2/2 addend, so it equals ic^2/2 for jump-free input).
struct JumpPenalty {
  double total = 0.0;
  std::vector<JumpRecord> records;
};

/// Projection onto conforming fields: identical away from jumps, the
/// two-sided midpoint (v- + v+)/2 at each jump level. The midpoint minimizes
/// the L2(Omega) distance to both limits.
SpaceTimeField project_conforming(const SpaceTimeField& vhat);

/// Method 1: |||u - vhat||| <= |||vhat - P vhat||| + bound(P vhat, y) in the
/// norm matching the extraction; the two addends are recorded separately
/// (components.nonconformity holds the projection distance).
CertifiedBound bound_method1(const SpaceTimeField& vhat, const FluxField& y,
                             const MajorantContext& ctx, BoundKind kind,
                             const std::optional<GreekParams>& params = std::nullopt);

/// Jump penalties by forward recursion over jump times: the terminal bound
/// at each jump already includes the penalties of earlier jumps.
JumpPenalty jump_penalty(const SpaceTimeField& vhat, const FluxField& y,
                         const MajorantContext& ctx);

/// Method 2: direct bounds for time-discontinuous approximations. On
/// jump-free input this reduces exactly (bit-for-bit) to the corresponding
/// conforming bound. Slab rates never difference across a jump; jumps enter
/// through the penalty only.
CertifiedBound bound_method2(const SpaceTimeField& vhat, const FluxField& y,
                             const MajorantContext& ctx, BoundKind kind,
                             const std::optional<GreekParams>& params = std::nullopt);

/// Conforming regularization of the time jumps: v_eps equals vhat outside
/// (tau - eps, tau) and ramps linearly from vhat(tau - eps) to v+ there
/// (one inserted level per jump). Requires 0 < eps < the adjacent slab
/// lengths. Retained as a validation device for the jump-penalty limit.
SpaceTimeField epsilon_regularize(const SpaceTimeField& vhat, double eps);

/// Synthetic jump injection for verification runs.
struct JumpInjection {
  double time = 0.5;
  enum class Kind { Bump, RestartInterp } kind = Kind::Bump;
  double amplitude = 0.1;  // Bump only
};

/// Implicit Euler solve that applies the configured state transforms at the
/// marked levels (bump: add amplitude * sin-shaped interior bump; restart-
/// interp: replace the state by its coarse-grid interpolant, the genuine
/// jump produced when the spatial resolution is switched mid-run) and then
/// continues stepping from the transformed state.
SpaceTimeField solve_with_jumps(const ProblemSpec& spec, const SpaceMesh& mesh,
                                const TimePartition& partition, ConvectionDisc disc,
                                const std::vector<JumpInjection>& jumps);

}  // namespace parabound
