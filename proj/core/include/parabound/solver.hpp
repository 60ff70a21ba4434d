#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parabound/fields.hpp"
#include "parabound/mesh.hpp"
#include "parabound/problem.hpp"
#include "parabound/timegrid.hpp"

namespace parabound {

enum class ConvectionDisc { Centered, Upwind };

/// Discretization parameters for the implicit Euler P1 solver.
struct SolveConfig {
  int nx = 21;
  int ny = 1;   // ignored in 1D
  int nt = 20;  // time slab count
  ConvectionDisc convection_disc = ConvectionDisc::Centered;
};

/// Closed-form manufactured solution with everything needed for exact error
/// and residual evaluation. The induced source f = u_t - lap(u) + a . grad u
/// and phi = u(.,0) are installed in `spec`.
struct ManufacturedCase {
  std::string name;
  ProblemSpec spec;
  SpaceTimeFn u;
  VectorFn grad_u;
  SpaceTimeFn u_t;
  SpaceTimeFn lap_u;
};

/// Catalog: sin_decay_1d, sin_decay_1d_neg, sep_2d.
ManufacturedCase manufactured(const std::string& name);
std::vector<std::string> manufactured_names();

/// Incremental implicit Euler stepper:
///   (M/dt + K + C) u^{k+1} = (M/dt) u^k + F^{k+1},
/// with lumped mass M, P1 stiffness K and convection C (centered by default,
/// optional upwind artificial diffusion). Boundary rows enforce zero values.
/// The state can be replaced between steps, which is how time-discontinuous
/// (restarted) approximations are produced.
class ImplicitEulerStepper {
 public:
  ImplicitEulerStepper(const ProblemSpec& spec, const SpaceMesh& mesh,
                       const TimePartition& partition, ConvectionDisc disc);
  ~ImplicitEulerStepper();
  ImplicitEulerStepper(ImplicitEulerStepper&&) noexcept;

  const std::vector<double>& state() const;
  void set_state(std::vector<double> nodal);
  /// Advances the state across slab s (from level s to level s+1).
  void advance(int s);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Full implicit Euler solve; initial level is the interpolated phi.
/// Deterministic: identical inputs give bit-identical output.
SpaceTimeField solve(const ProblemSpec& spec, const SpaceMesh& mesh, const TimePartition& partition,
                     ConvectionDisc disc = ConvectionDisc::Centered);

/// NormBundle of e = u - v with the closed forms of the manufactured case
/// evaluated inside the quadrature.
NormBundle true_error(const SpaceTimeField& v, const ManufacturedCase& mcase, const SpaceMesh& mesh,
                      const ConvectionClass& cls, int time_quad = 4);

}  // namespace parabound
