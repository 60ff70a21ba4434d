#pragma once

#include <vector>

#include "parabound/fields.hpp"
#include "parabound/majorant.hpp"

namespace parabound {

/// Volume-weighted average of adjacent cell gradients of v, per time level.
/// Jump levels average both sides into both sides (left from left, right
/// from right), so the result mirrors v's time structure.
FluxField flux_average(const SpaceTimeField& v, const SpaceMesh& mesh);

struct FluxOptions {
  /// Ratios scaling the residual weight; the best resulting majorant wins.
  std::vector<double> weight_grid{1e-2, 1e-1, 1.0, 1e1, 1e2};
};

/// Time-lumped quadratic objective the minimizer solves:
///   Q(y) = sum_k w_k [ w1 ||y_k - grad v(t_k)||^2
///                    + sum_side sigma ||f - v_t - a.grad v + Div y_k||^2_w2 ]
/// with trapezoidal time weights w_k and per-cell residual weights w2. Used
/// for optimality validation.
double flux_objective(const SpaceTimeField& v, const FluxField& y, const MajorantContext& ctx,
                      double w1, const std::vector<double>& w2_cell);

/// Minimizer of Q for fixed weights: one SPD normal-equation solve per time
/// level (levels decouple under time lumping).
FluxField flux_minimize_weights(const SpaceTimeField& v, const MajorantContext& ctx, double w1,
                                const std::vector<double>& w2_cell);

/// Flux reconstruction by direct minimization. Builds the residual weight
/// from the convection class (C_F^2 for div a = 0; the lambda-split pointwise
/// weight at default parameters otherwise), sweeps the weight-ratio grid and
/// returns the candidate with the smallest targeted majorant. The average
/// flux is always among the candidates, so the result never loses to it.
FluxField flux_minimize(const SpaceTimeField& v, const MajorantContext& ctx,
                        const FluxOptions& opts = {});

}  // namespace parabound
