#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "parabound/common.hpp"
#include "parabound/problem.hpp"

namespace parabound {

/// Uniform tensor-product node grid over an axis-aligned box with a fixed
/// simplicial cell structure: intervals in 1D; in 2D every grid rectangle is
/// split into two triangles along the lower-left/upper-right diagonal, so P1
/// fields have cell-constant gradients and componentwise P1 fluxes have
/// cell-constant divergence.
///
/// Cell quadrature is tensor-product Gauss-Legendre, in 2D collapsed onto
/// each triangle (Duffy map), so that with q points per axis it integrates
/// triangle polynomials of degree <= 2q - 2 exactly.
class SpaceMesh {
 public:
  struct QPoint {
    Vec offset;                    // position relative to the owning rectangle's corner
    double weight;                 // includes the cell Jacobian; sums to the cell measure
    std::array<double, 3> basis;   // P1 vertex basis values at the point
  };

  SpaceMesh(const Domain& domain, std::array<int, 2> nodes_per_axis, int quad_points = 4);

  int dim() const { return dim_; }
  const Domain& domain() const { return domain_; }
  std::array<int, 2> nodes_per_axis() const { return n_; }
  std::array<double, 2> spacing() const { return h_; }
  double min_spacing() const { return dim_ == 2 ? std::min(h_[0], h_[1]) : h_[0]; }

  int node_count() const { return node_count_; }
  int node_index(int i, int j = 0) const { return j * n_[0] + i; }
  Vec node_coord(int node) const;
  bool is_boundary(int node) const { return boundary_[node] != 0; }
  const std::vector<std::uint8_t>& boundary_mask() const { return boundary_; }
  int interior_count() const { return interior_count_; }

  int cell_count() const { return cell_count_; }
  int verts_per_cell() const { return dim_ == 1 ? 2 : 3; }
  std::array<int, 3> cell_vertices(int cell) const;
  int cell_class(int cell) const { return dim_ == 1 ? 0 : cell & 1; }
  Vec cell_corner(int cell) const;  // owning rectangle's lower-left corner
  double cell_measure() const { return measure_; }
  const std::array<Vec, 3>& basis_gradients(int cell_class) const { return grads_[cell_class]; }
  const std::vector<QPoint>& quadrature(int cell_class) const { return qpts_[cell_class]; }
  int quad_points_per_cell() const { return static_cast<int>(qpts_[0].size()); }

  /// P1 value of nodal data at a quadrature point of a cell.
  double eval(const std::vector<double>& nodal, int cell, const QPoint& qp) const {
    auto v = cell_vertices(cell);
    double s = qp.basis[0] * nodal[v[0]] + qp.basis[1] * nodal[v[1]];
    if (dim_ == 2) s += qp.basis[2] * nodal[v[2]];
    return s;
  }

  /// Cell-constant gradient of a P1 field.
  Vec cell_gradient(const std::vector<double>& nodal, int cell) const {
    auto v = cell_vertices(cell);
    const auto& g = grads_[cell_class(cell)];
    Vec r{0.0, 0.0};
    int nv = verts_per_cell();
    for (int k = 0; k < nv; ++k) r = r + nodal[v[k]] * g[k];
    return r;
  }

 private:
  Domain domain_;
  int dim_;
  std::array<int, 2> n_;
  std::array<double, 2> h_;
  int node_count_ = 0;
  int cell_count_ = 0;
  int interior_count_ = 0;
  double measure_ = 0.0;
  std::vector<std::uint8_t> boundary_;
  std::array<std::array<Vec, 3>, 2> grads_{};
  std::array<std::vector<QPoint>, 2> qpts_;
};

}  // namespace parabound
