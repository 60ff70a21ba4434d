#include "parabound/mesh.hpp"

#include "parabound/quadrature.hpp"

namespace parabound {

SpaceMesh::SpaceMesh(const Domain& domain, std::array<int, 2> nodes_per_axis, int quad_points)
    : domain_(domain), dim_(domain.dim), n_(nodes_per_axis) {
  domain_.validate();
  if (quad_points < 3) throw Error("mesh", "quadrature order must be at least 3 per axis");
  for (int i = 0; i < dim_; ++i) {
    if (n_[i] < 2) throw Error("mesh", "need at least 2 nodes per axis");
    h_[i] = domain_.extents[i] / (n_[i] - 1);
  }
  if (dim_ == 1) {
    n_[1] = 1;
    h_[1] = 0.0;
    node_count_ = n_[0];
    cell_count_ = n_[0] - 1;
    measure_ = h_[0];
  } else {
    node_count_ = n_[0] * n_[1];
    cell_count_ = 2 * (n_[0] - 1) * (n_[1] - 1);
    measure_ = 0.5 * h_[0] * h_[1];
  }

  boundary_.assign(node_count_, 0);
  for (int j = 0; j < n_[1]; ++j) {
    for (int i = 0; i < n_[0]; ++i) {
      bool b = (i == 0 || i == n_[0] - 1);
      if (dim_ == 2) b = b || (j == 0 || j == n_[1] - 1);
      boundary_[node_index(i, j)] = b ? 1 : 0;
    }
  }
  interior_count_ = 0;
  for (auto b : boundary_)
    if (!b) ++interior_count_;

  QuadRule1D gl = gauss_legendre_01(quad_points);

  if (dim_ == 1) {
    grads_[0] = {Vec{-1.0 / h_[0], 0.0}, Vec{1.0 / h_[0], 0.0}, Vec{0.0, 0.0}};
    for (int i = 0; i < gl.size(); ++i) {
      QPoint qp;
      qp.offset = {gl.nodes[i] * h_[0], 0.0};
      qp.weight = gl.weights[i] * h_[0];
      qp.basis = {1.0 - gl.nodes[i], gl.nodes[i], 0.0};
      qpts_[0].push_back(qp);
    }
    qpts_[1] = qpts_[0];
    grads_[1] = grads_[0];
    return;
  }

  const double hx = h_[0], hy = h_[1];
  // Lower triangle (A, B, C) with A=(0,0), B=(hx,0), C=(hx,hy):
  //   lam_A = 1 - x/hx, lam_B = x/hx - y/hy, lam_C = y/hy.
  grads_[0] = {Vec{-1.0 / hx, 0.0}, Vec{1.0 / hx, -1.0 / hy}, Vec{0.0, 1.0 / hy}};
  // Upper triangle (A, C, D) with D=(0,hy):
  //   lam_A = 1 - y/hy, lam_C = x/hx, lam_D = y/hy - x/hx.
  grads_[1] = {Vec{0.0, -1.0 / hy}, Vec{1.0 / hx, 0.0}, Vec{-1.0 / hx, 1.0 / hy}};

  for (int i = 0; i < gl.size(); ++i) {
    for (int j = 0; j < gl.size(); ++j) {
      double xi = gl.nodes[i], eta = gl.nodes[j];
      double w = gl.weights[i] * gl.weights[j] * xi * hx * hy;  // Duffy Jacobian
      // Lower: (u, v) = (xi, xi*eta) with 0 <= v <= u.
      {
        QPoint qp;
        double u = xi, v = xi * eta;
        qp.offset = {u * hx, v * hy};
        qp.weight = w;
        qp.basis = {1.0 - u, u - v, v};
        qpts_[0].push_back(qp);
      }
      // Upper: (u, v) = (xi*eta, xi) with u <= v.
      {
        QPoint qp;
        double u = xi * eta, v = xi;
        qp.offset = {u * hx, v * hy};
        qp.weight = w;
        qp.basis = {1.0 - v, u, v - u};
        qpts_[1].push_back(qp);
      }
    }
  }
}

Vec SpaceMesh::node_coord(int node) const {
  int i = node % n_[0];
  int j = node / n_[0];
  return {domain_.origin[0] + i * h_[0], dim_ == 2 ? domain_.origin[1] + j * h_[1] : 0.0};
}

std::array<int, 3> SpaceMesh::cell_vertices(int cell) const {
  if (dim_ == 1) return {cell, cell + 1, -1};
  int rect = cell >> 1;
  int i = rect % (n_[0] - 1);
  int j = rect / (n_[0] - 1);
  int a = node_index(i, j);
  int b = node_index(i + 1, j);
  int c = node_index(i + 1, j + 1);
  int d = node_index(i, j + 1);
  if ((cell & 1) == 0) return {a, b, c};
  return {a, c, d};
}

Vec SpaceMesh::cell_corner(int cell) const {
  if (dim_ == 1) return {domain_.origin[0] + cell * h_[0], 0.0};
  int rect = cell >> 1;
  int i = rect % (n_[0] - 1);
  int j = rect / (n_[0] - 1);
  return {domain_.origin[0] + i * h_[0], domain_.origin[1] + j * h_[1]};
}

}  // namespace parabound
