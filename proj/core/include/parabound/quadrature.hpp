#pragma once

#include <vector>

namespace parabound {

/// Gauss-Legendre rule on the reference interval [0, 1].
struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
  int size() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree
/// <= 2n - 1. Nodes are computed by Newton iteration on the Legendre
/// polynomial and are accurate to machine precision.
QuadRule1D gauss_legendre_01(int n);

}  // namespace parabound
