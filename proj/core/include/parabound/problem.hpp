#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "parabound/common.hpp"

namespace parabound {

/// Axis-aligned box domain in 1 or 2 dimensions.
struct Domain {
  int dim = 1;
  std::array<double, 2> extents{1.0, 1.0};  // side lengths L_i > 0
  std::array<double, 2> origin{0.0, 0.0};   // lower-left corner

  static Domain interval(double length, double origin = 0.0);
  static Domain box(double lx, double ly, double ox = 0.0, double oy = 0.0);

  /// Throws Error("problem", ...) if dim or extents are invalid.
  void validate() const;
};

enum class ConvectionKind { Constant, Linear };

/// Convection field a(x): either a constant vector or a linear field A*x.
/// Both have spatially constant divergence, which keeps the delta weight
/// exact. Fields with positive divergence are rejected at classification.
struct ConvectionField {
  ConvectionKind kind = ConvectionKind::Constant;
  Vec c{0.0, 0.0};                                       // Constant
  std::array<std::array<double, 2>, 2> A{{{0, 0}, {0, 0}}};  // Linear: a(x) = A x

  static ConvectionField constant(Vec c);
  static ConvectionField linear(const std::array<std::array<double, 2>, 2>& A);
  static ConvectionField linear1d(double a11);

  Vec at(Vec x) const;
  /// div a; exactly 0 for Constant, trace(A) for Linear.
  double divergence() const;
  /// sup-norm bound of |a| over the given domain (used for scaling checks
  /// and upwind stabilization).
  double max_magnitude(const Domain& d) const;
};

/// Scalar function of space and time, f(x, t).
struct SpaceTimeFn {
  std::string name;
  std::function<double(Vec, double)> fn;
  double operator()(Vec x, double t) const { return fn(x, t); }
  explicit operator bool() const { return static_cast<bool>(fn); }
};

/// Scalar function of space only.
struct SpatialFn {
  std::string name;
  std::function<double(Vec)> fn;
  double operator()(Vec x) const { return fn(x); }
  explicit operator bool() const { return static_cast<bool>(fn); }
};

/// The continuous problem: u_t - div(grad u) + a . grad u = f on (0,T) x Omega,
/// u(.,0) = phi, u = 0 on the lateral boundary.
struct ProblemSpec {
  Domain domain;
  double horizon_T = 1.0;
  ConvectionField convection;
  SpaceTimeFn source_f;
  SpatialFn initial_phi;
};

enum class ConvectionCase { DivZero, StrictNegative };

/// Classification of the convection field. delta_sq = -div(a)/2 is the
/// reaction-like weight of the StrictNegative estimates; it is spatially
/// constant for the supported convection catalog.
struct ConvectionClass {
  ConvectionCase tag = ConvectionCase::DivZero;
  double delta_sq = 0.0;  // valid iff tag == StrictNegative

  bool div_zero() const { return tag == ConvectionCase::DivZero; }
};

/// Friedrichs constant of the box: the smallest C with
/// ||w|| <= C ||grad w|| for all w in H^1_0. For a box this is the
/// reciprocal square root of the first Dirichlet Laplacian eigenvalue,
/// C_F = (pi^2 sum_i 1/L_i^2)^{-1/2}.
double friedrichs_constant(const Domain& domain);

/// Splits the problem into the div(a) = 0 and div(a) < 0 cases.
/// Throws Error("problem", ...) when div(a) > 0.
ConvectionClass classify_convection(const ConvectionField& convection, const Domain& domain);

struct Violation {
  std::string code;
  std::string message;
  std::string location;  // node/axis info when applicable
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every ProblemSpec invariant (positive horizon, admissible
/// convection, boundary-compatible initial data, finite source norm) and
/// reports violations instead of aborting.
ValidationReport validate_problem(const ProblemSpec& spec);

}  // namespace parabound
