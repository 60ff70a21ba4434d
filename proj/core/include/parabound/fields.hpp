#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "parabound/mesh.hpp"
#include "parabound/problem.hpp"
#include "parabound/timegrid.hpp"

namespace parabound {

/// Vector-valued closed form, e.g. an exact gradient.
struct VectorFn {
  std::string name;
  std::function<Vec(Vec, double)> fn;
  Vec operator()(Vec x, double t) const { return fn(x, t); }
  explicit operator bool() const { return static_cast<bool>(fn); }
};

enum class Side { Left, Right };

/// Nodal P1-in-space, piecewise-linear-in-time scalar field. Levels marked
/// as jumps in the partition carry two value arrays (left and right limit);
/// all other levels carry exactly one. Boundary nodes hold exact zeros.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(TimePartition partition, int node_count);

  const TimePartition& partition() const { return part_; }
  int node_count() const { return nodes_; }
  bool conforming() const { return !part_.any_jump(); }

  std::vector<double>& values(int level, Side side = Side::Left);
  const std::vector<double>& values(int level, Side side = Side::Left) const;

  /// Field value arrays at the endpoints of slab s: the right limit at t_s
  /// and the left limit at t_{s+1}.
  const std::vector<double>& slab_begin(int s) const { return values(s, Side::Right); }
  const std::vector<double>& slab_end(int s) const { return values(s + 1, Side::Left); }

  /// Turns `level` into a jump level; the right limit starts as a copy of
  /// the current values.
  void mark_jump(int level);

  /// Nodal values interpolated to time t within slab s (theta in [0,1]).
  std::vector<double> at_slab_time(int s, double theta) const;

 private:
  TimePartition part_;
  int nodes_ = 0;
  std::vector<std::vector<double>> main_;                  // left limit (or single value)
  std::vector<std::optional<std::vector<double>>> right_;  // right limit at jump levels
};

/// Componentwise continuous piecewise-linear flux y (so y is H(div) in space
/// at every time), piecewise linear in time. Like SpaceTimeField it may carry
/// two-sided values at jump-marked levels; time-discontinuous fluxes are
/// admissible since only L2-in-time regularity is needed.
class FluxField {
 public:
  FluxField() = default;
  FluxField(TimePartition partition, int node_count, int dim);

  const TimePartition& partition() const { return part_; }
  int node_count() const { return nodes_; }
  int dim() const { return dim_; }

  std::vector<double>& comp(int level, int d, Side side = Side::Left);
  const std::vector<double>& comp(int level, int d, Side side = Side::Left) const;

  void mark_jump(int level);

  /// Exact resampling onto a refinement of the current partition (every old
  /// level must be present in the new one). Used when extra levels are
  /// inserted, e.g. by the epsilon-regularization of time jumps.
  FluxField resampled_onto(const TimePartition& fine) const;

 private:
  TimePartition part_;
  int nodes_ = 0;
  int dim_ = 1;
  // indexed [level][component]
  std::vector<std::vector<std::vector<double>>> main_;
  std::vector<std::optional<std::vector<std::vector<double>>>> right_;
};

enum class NormKind { Combined, SliceT, CombinedDelta, CombinedDeltaHat, GeneralFunctional };

const char* to_string(NormKind k);

/// All error measures of one field e:
///   combined^2           = grad_QT^2 + slice_T^2 / 2
///   combined_delta^2     = grad_QT^2 + delta_QT^2 + slice_T^2
///   combined_delta_hat^2 = grad_QT^2 + delta_QT^2 + slice_T^2 / 2
struct NormBundle {
  double grad_QT = 0.0;
  double delta_QT = 0.0;  // ||delta e||, 0 in the DivZero case
  double slice_T = 0.0;
  double slice_0 = 0.0;
  double l2_QT = 0.0;  // plain ||e||_{Q_T}; handy for Friedrichs checks
  double combined = 0.0;
  double combined_delta = 0.0;
  double combined_delta_hat = 0.0;

  static NormBundle from_squares(double grad2, double delta2, double sliceT2, double slice02,
                                 double l22);
  double by_kind(NormKind k) const;
};

/// Cell-constant spatial gradients of a P1 field at one time level/side.
std::vector<Vec> level_gradients(const SpaceTimeField& v, const SpaceMesh& mesh, int level,
                                 Side side = Side::Left);

/// Slab rate (v(t_{k+1}-) - v(t_k+)) / tau_k; jumps never contribute here,
/// they enter the estimates through the jump penalties only.
std::vector<double> slab_rate(const SpaceTimeField& v, int s);
std::vector<std::vector<double>> time_derivative(const SpaceTimeField& v);

/// Cell-constant divergence of a componentwise P1 flux at one level/side.
std::vector<double> level_divergence(const FluxField& y, const SpaceMesh& mesh, int level,
                                     Side side = Side::Left);

/// Norms of a discrete field (exact quadrature: all integrands are piecewise
/// polynomial of low degree).
NormBundle norms(const SpaceTimeField& e, const SpaceMesh& mesh, const ConvectionClass& cls,
                 int time_quad = 4);

/// Norms of u - v with closed-form u and grad u evaluated directly at the
/// quadrature points (no interpolation of u). Jump-aware in v.
NormBundle norms_against(const SpaceTimeFn& u, const VectorFn& grad_u, const SpaceTimeField& v,
                         const SpaceMesh& mesh, const ConvectionClass& cls, int time_quad = 4);

/// L2(Omega) norm of nodal P1 data.
double slice_norm(const std::vector<double>& nodal, const SpaceMesh& mesh);

/// L2(Omega) norm of g(x) - (P1 data) at a fixed time.
double slice_norm_against(const std::function<double(Vec)>& g, const std::vector<double>& nodal,
                          const SpaceMesh& mesh);

/// Nodal interpolant of a closed form on mesh x partition. Boundary nodes
/// take the closed form's value; when `require_h10` is set they must vanish
/// (up to roundoff) and are snapped to exact zeros, otherwise an error is
/// raised.
SpaceTimeField interpolate_field(const SpaceTimeFn& fn, const SpaceMesh& mesh,
                                 const TimePartition& partition, bool require_h10 = true);

/// Quadrature of a closed form over Q_T / Omega with the module rules.
double integrate_spacetime(const SpaceMesh& mesh, const TimePartition& partition, int time_quad,
                           const std::function<double(Vec, double)>& f);
double integrate_space(const SpaceMesh& mesh, const std::function<double(Vec)>& f);

/// Defect of the convection identity
///   int_{Q_T} (a . grad w) w + (1/2) int_{Q_T} w^2 div a  =  0
/// for boundary-vanishing w, evaluated with the module quadrature. Returns
/// the defect and a scale (the magnitudes of the two addends) for relative
/// comparison.
struct DivRelCheck {
  double defect;
  double scale;
};
DivRelCheck divrel_defect(const SpaceTimeField& w, const SpaceMesh& mesh,
                          const ConvectionField& a, int time_quad = 4);

/// a - b on a common partition; the result is jump-marked wherever either
/// input is.
SpaceTimeField subtract(const SpaceTimeField& a, const SpaceTimeField& b);

bool boundary_zero(const SpaceTimeField& v, const SpaceMesh& mesh, double tol = 0.0);

}  // namespace parabound
