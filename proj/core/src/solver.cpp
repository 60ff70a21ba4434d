#include "parabound/solver.hpp"

#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace parabound {

namespace {

constexpr double kPi = M_PI;

ManufacturedCase make_sin_decay_1d(bool negative_divergence) {
  ManufacturedCase mc;
  mc.name = negative_divergence ? "sin_decay_1d_neg" : "sin_decay_1d";
  mc.spec.domain = Domain::interval(1.0);
  mc.spec.horizon_T = 1.0;
  mc.spec.convection = negative_divergence ? ConvectionField::linear1d(-1.0)
                                           : ConvectionField::constant({1.0, 0.0});
  mc.u = {"sin(pi x) exp(-t)", [](Vec x, double t) { return std::sin(kPi * x[0]) * std::exp(-t); }};
  mc.grad_u = {"pi cos(pi x) exp(-t)", [](Vec x, double t) {
                 return Vec{kPi * std::cos(kPi * x[0]) * std::exp(-t), 0.0};
               }};
  mc.u_t = {"-sin(pi x) exp(-t)",
            [](Vec x, double t) { return -std::sin(kPi * x[0]) * std::exp(-t); }};
  mc.lap_u = {"-pi^2 sin(pi x) exp(-t)",
              [](Vec x, double t) { return -kPi * kPi * std::sin(kPi * x[0]) * std::exp(-t); }};
  ConvectionField a = mc.spec.convection;
  auto u_t = mc.u_t.fn;
  auto lap = mc.lap_u.fn;
  auto grad = mc.grad_u.fn;
  mc.spec.source_f = {"induced by " + mc.name, [a, u_t, lap, grad](Vec x, double t) {
                        return u_t(x, t) - lap(x, t) + dot(a.at(x), grad(x, t));
                      }};
  auto u = mc.u.fn;
  mc.spec.initial_phi = {"u(.,0)", [u](Vec x) { return u(x, 0.0); }};
  return mc;
}

ManufacturedCase make_sep_2d() {
  ManufacturedCase mc;
  mc.name = "sep_2d";
  mc.spec.domain = Domain::box(1.0, 1.0);
  mc.spec.horizon_T = 1.0;
  mc.spec.convection = ConvectionField::constant({1.0, 0.5});
  mc.u = {"sin(pi x) sin(pi y) exp(-t)", [](Vec x, double t) {
            return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::exp(-t);
          }};
  mc.grad_u = {"grad", [](Vec x, double t) {
                 double e = std::exp(-t);
                 return Vec{kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1]) * e,
                            kPi * std::sin(kPi * x[0]) * std::cos(kPi * x[1]) * e};
               }};
  mc.u_t = {"u_t", [](Vec x, double t) {
              return -std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::exp(-t);
            }};
  mc.lap_u = {"lap u", [](Vec x, double t) {
                return -2.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]) *
                       std::exp(-t);
              }};
  ConvectionField a = mc.spec.convection;
  auto u_t = mc.u_t.fn;
  auto lap = mc.lap_u.fn;
  auto grad = mc.grad_u.fn;
  mc.spec.source_f = {"induced by sep_2d", [a, u_t, lap, grad](Vec x, double t) {
                        return u_t(x, t) - lap(x, t) + dot(a.at(x), grad(x, t));
                      }};
  auto u = mc.u.fn;
  mc.spec.initial_phi = {"u(.,0)", [u](Vec x) { return u(x, 0.0); }};
  return mc;
}

}  // namespace

ManufacturedCase manufactured(const std::string& name) {
  if (name == "sin_decay_1d") return make_sin_decay_1d(false);
  if (name == "sin_decay_1d_neg") return make_sin_decay_1d(true);
  if (name == "sep_2d") return make_sep_2d();
  throw Error("solver", "unknown manufactured case '" + name + "'");
}

std::vector<std::string> manufactured_names() {
  return {"sin_decay_1d", "sin_decay_1d_neg", "sep_2d"};
}

struct ImplicitEulerStepper::Impl {
  const ProblemSpec& spec;
  const SpaceMesh& mesh;
  TimePartition partition;
  Eigen::SparseMatrix<double> transport;  // K + C with boundary rows blanked
  std::vector<double> lumped_mass;        // interior entries; boundary rows use identity
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  double factored_dt = -1.0;
  std::vector<double> state;

  Impl(const ProblemSpec& s, const SpaceMesh& m, const TimePartition& p, ConvectionDisc disc)
      : spec(s), mesh(m), partition(p) {
    assemble(disc);
    // Initial level: interpolated phi with boundary forced to zero.
    state.assign(mesh.node_count(), 0.0);
    for (int n = 0; n < mesh.node_count(); ++n) {
      if (mesh.is_boundary(n)) continue;
      state[n] = spec.initial_phi(mesh.node_coord(n));
    }
  }

  void assemble(ConvectionDisc disc) {
    const int N = mesh.node_count();
    const int nv = mesh.verts_per_cell();
    lumped_mass.assign(N, 0.0);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(mesh.cell_count()) * nv * nv);
    const double meas = mesh.cell_measure();
    const double h_avg = mesh.dim() == 2 ? 0.5 * (mesh.spacing()[0] + mesh.spacing()[1])
                                         : mesh.spacing()[0];
    for (int c = 0; c < mesh.cell_count(); ++c) {
      auto verts = mesh.cell_vertices(c);
      const auto& g = mesh.basis_gradients(mesh.cell_class(c));
      Vec corner = mesh.cell_corner(c);
      // Upwind stabilization: cell Peclet-scaled artificial diffusion.
      double nu = 0.0;
      if (disc == ConvectionDisc::Upwind) {
        Vec center = corner + (mesh.dim() == 2
                                   ? Vec{mesh.spacing()[0] * 0.5, mesh.spacing()[1] * 0.5}
                                   : Vec{mesh.spacing()[0] * 0.5, 0.0});
        Vec ac = spec.convection.at(center);
        nu = 0.5 * h_avg * std::sqrt(dot(ac, ac));
      }
      for (int i = 0; i < nv; ++i) {
        lumped_mass[verts[i]] += meas / nv;
        for (int j = 0; j < nv; ++j) {
          double kij = (1.0 + nu) * meas * dot(g[i], g[j]);
          double cij = 0.0;
          for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
            Vec x = corner + qp.offset;
            cij += qp.weight * dot(spec.convection.at(x), g[j]) * qp.basis[i];
          }
          if (!mesh.is_boundary(verts[i]) && !mesh.is_boundary(verts[j]))
            trips.emplace_back(verts[i], verts[j], kij + cij);
        }
      }
    }
    transport.resize(N, N);
    transport.setFromTriplets(trips.begin(), trips.end());
  }

  void factorize(double dt) {
    const int N = mesh.node_count();
    Eigen::SparseMatrix<double> A = transport;
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(N);
    for (int n = 0; n < N; ++n) {
      if (mesh.is_boundary(n))
        diag.emplace_back(n, n, 1.0);
      else
        diag.emplace_back(n, n, lumped_mass[n] / dt);
    }
    Eigen::SparseMatrix<double> D(N, N);
    D.setFromTriplets(diag.begin(), diag.end());
    A += D;
    A.makeCompressed();
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw Error("solver", "linear solve failure: singular implicit Euler system");
    factored_dt = dt;
  }

  void advance(int s) {
    const int N = mesh.node_count();
    double dt = partition.slab_length(s);
    if (dt != factored_dt) factorize(dt);
    double t1 = partition.level(s + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    // Load vector F^{k+1} by quadrature, interior rows only.
    const int nv = mesh.verts_per_cell();
    for (int c = 0; c < mesh.cell_count(); ++c) {
      auto verts = mesh.cell_vertices(c);
      Vec corner = mesh.cell_corner(c);
      for (const auto& qp : mesh.quadrature(mesh.cell_class(c))) {
        double fv = spec.source_f(corner + qp.offset, t1);
        for (int i = 0; i < nv; ++i) {
          if (!mesh.is_boundary(verts[i])) rhs[verts[i]] += qp.weight * fv * qp.basis[i];
        }
      }
    }
    for (int n = 0; n < N; ++n) {
      if (!mesh.is_boundary(n)) rhs[n] += lumped_mass[n] / dt * state[n];
    }
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw Error("solver", "linear solve failure during time step");
    for (int n = 0; n < N; ++n) state[n] = mesh.is_boundary(n) ? 0.0 : x[n];
  }
};

ImplicitEulerStepper::ImplicitEulerStepper(const ProblemSpec& spec, const SpaceMesh& mesh,
                                           const TimePartition& partition, ConvectionDisc disc)
    : impl_(std::make_unique<Impl>(spec, mesh, partition, disc)) {}

ImplicitEulerStepper::~ImplicitEulerStepper() = default;
ImplicitEulerStepper::ImplicitEulerStepper(ImplicitEulerStepper&&) noexcept = default;

const std::vector<double>& ImplicitEulerStepper::state() const { return impl_->state; }

void ImplicitEulerStepper::set_state(std::vector<double> nodal) {
  if (static_cast<int>(nodal.size()) != impl_->mesh.node_count())
    throw Error("solver", "state size mismatch");
  impl_->state = std::move(nodal);
}

void ImplicitEulerStepper::advance(int s) { impl_->advance(s); }

SpaceTimeField solve(const ProblemSpec& spec, const SpaceMesh& mesh, const TimePartition& partition,
                     ConvectionDisc disc) {
  ImplicitEulerStepper stepper(spec, mesh, partition, disc);
  SpaceTimeField v(partition, mesh.node_count());
  v.values(0) = stepper.state();
  for (int s = 0; s < partition.slab_count(); ++s) {
    stepper.advance(s);
    v.values(s + 1) = stepper.state();
  }
  return v;
}

NormBundle true_error(const SpaceTimeField& v, const ManufacturedCase& mcase, const SpaceMesh& mesh,
                      const ConvectionClass& cls, int time_quad) {
  return norms_against(mcase.u, mcase.grad_u, v, mesh, cls, time_quad);
}

}  // namespace parabound
