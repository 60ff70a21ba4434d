#include "parabound/problem.hpp"

#include <cmath>

#include "parabound/quadrature.hpp"

namespace parabound {

Domain Domain::interval(double length, double origin) {
  Domain d;
  d.dim = 1;
  d.extents = {length, 1.0};
  d.origin = {origin, 0.0};
  return d;
}

Domain Domain::box(double lx, double ly, double ox, double oy) {
  Domain d;
  d.dim = 2;
  d.extents = {lx, ly};
  d.origin = {ox, oy};
  return d;
}

void Domain::validate() const {
  if (dim != 1 && dim != 2) throw Error("problem", "domain dimension must be 1 or 2");
  for (int i = 0; i < dim; ++i) {
    if (!(extents[i] > 0.0) || !std::isfinite(extents[i]))
      throw Error("problem", "domain extent must be positive on axis " + std::to_string(i));
  }
}

ConvectionField ConvectionField::constant(Vec c) {
  ConvectionField a;
  a.kind = ConvectionKind::Constant;
  a.c = c;
  return a;
}

ConvectionField ConvectionField::linear(const std::array<std::array<double, 2>, 2>& A) {
  ConvectionField a;
  a.kind = ConvectionKind::Linear;
  a.A = A;
  return a;
}

ConvectionField ConvectionField::linear1d(double a11) {
  return linear({{{a11, 0.0}, {0.0, 0.0}}});
}

Vec ConvectionField::at(Vec x) const {
  if (kind == ConvectionKind::Constant) return c;
  return {A[0][0] * x[0] + A[0][1] * x[1], A[1][0] * x[0] + A[1][1] * x[1]};
}

double ConvectionField::divergence() const {
  if (kind == ConvectionKind::Constant) return 0.0;
  return A[0][0] + A[1][1];
}

double ConvectionField::max_magnitude(const Domain& d) const {
  if (kind == ConvectionKind::Constant) return std::sqrt(dot(c, c));
  // Linear field: |A x| attains its maximum over the box at a corner.
  double best = 0.0;
  for (int cx = 0; cx < 2; ++cx) {
    for (int cy = 0; cy < (d.dim == 2 ? 2 : 1); ++cy) {
      Vec x{d.origin[0] + cx * d.extents[0], d.dim == 2 ? d.origin[1] + cy * d.extents[1] : 0.0};
      Vec a = at(x);
      best = std::max(best, std::sqrt(dot(a, a)));
    }
  }
  return best;
}

double friedrichs_constant(const Domain& domain) {
  domain.validate();
  double lambda1 = 0.0;
  for (int i = 0; i < domain.dim; ++i) lambda1 += 1.0 / sqr(domain.extents[i]);
  lambda1 *= M_PI * M_PI;
  return 1.0 / std::sqrt(lambda1);
}

ConvectionClass classify_convection(const ConvectionField& convection, const Domain& domain) {
  domain.validate();
  double div = convection.divergence();
  if (div > 0.0)
    throw Error("problem", "convection field has positive divergence (div a = " +
                               std::to_string(div) + "), assumption div a <= 0 violated");
  ConvectionClass cls;
  if (div == 0.0) {
    cls.tag = ConvectionCase::DivZero;
    cls.delta_sq = 0.0;
  } else {
    cls.tag = ConvectionCase::StrictNegative;
    cls.delta_sq = -0.5 * div;
  }
  return cls;
}

namespace {

// Samples the boundary of the box with `n` nodes per axis.
std::vector<Vec> boundary_samples(const Domain& d, int n) {
  std::vector<Vec> pts;
  if (d.dim == 1) {
    pts.push_back({d.origin[0], 0.0});
    pts.push_back({d.origin[0] + d.extents[0], 0.0});
    return pts;
  }
  for (int i = 0; i < n; ++i) {
    double x = d.origin[0] + d.extents[0] * i / (n - 1);
    pts.push_back({x, d.origin[1]});
    pts.push_back({x, d.origin[1] + d.extents[1]});
  }
  for (int j = 1; j + 1 < n; ++j) {
    double y = d.origin[1] + d.extents[1] * j / (n - 1);
    pts.push_back({d.origin[0], y});
    pts.push_back({d.origin[0] + d.extents[0], y});
  }
  return pts;
}

}  // namespace

ValidationReport validate_problem(const ProblemSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string code, std::string msg, std::string loc = "") {
    report.violations.push_back({std::move(code), std::move(msg), std::move(loc)});
  };

  if (spec.domain.dim != 1 && spec.domain.dim != 2)
    add("bad_dimension", "domain dimension must be 1 or 2");
  for (int i = 0; i < std::min(spec.domain.dim, 2); ++i) {
    if (!(spec.domain.extents[i] > 0.0))
      add("bad_extent", "nonpositive extent", "axis " + std::to_string(i));
  }
  if (!(spec.horizon_T > 0.0)) add("nonpositive_horizon", "time horizon T must be positive");

  if (spec.convection.divergence() > 0.0)
    add("positive_divergence", "convection divergence must satisfy div a <= 0");

  if (!spec.initial_phi) {
    add("missing_initial", "initial data phi not set");
  } else {
    // H^1_0 compatibility: phi must vanish on the boundary.
    const double tol = 1e-12;
    int idx = 0;
    for (const Vec& x : boundary_samples(spec.domain, 33)) {
      double v = spec.initial_phi(x);
      if (std::abs(v) > tol) {
        add("nonzero_boundary_trace",
            "initial data does not vanish on the boundary (value " + std::to_string(v) + ")",
            "boundary sample " + std::to_string(idx) + " at x=(" + std::to_string(x[0]) + "," +
                std::to_string(x[1]) + ")");
        break;
      }
      ++idx;
    }
  }

  if (!spec.source_f) {
    add("missing_source", "source f not set");
  } else if (spec.horizon_T > 0.0) {
    // Finite L2(Q_T) norm under a probe quadrature.
    QuadRule1D q = gauss_legendre_01(4);
    const int ns = 17, nt = 9;
    double acc = 0.0;
    bool finite = true;
    for (int k = 0; k < nt && finite; ++k) {
      double t = spec.horizon_T * (k + 0.5) / nt;
      for (int i = 0; i < ns && finite; ++i) {
        for (int j = 0; j < (spec.domain.dim == 2 ? ns : 1); ++j) {
          Vec x{spec.domain.origin[0] + spec.domain.extents[0] * (i + q.nodes[i % q.size()]) / ns,
                spec.domain.dim == 2
                    ? spec.domain.origin[1] + spec.domain.extents[1] * (j + q.nodes[j % q.size()]) / ns
                    : 0.0};
          double v = spec.source_f(x, t);
          if (!std::isfinite(v)) {
            add("source_not_integrable", "source f is not finite",
                "t=" + std::to_string(t) + " x=(" + std::to_string(x[0]) + "," +
                    std::to_string(x[1]) + ")");
            finite = false;
            break;
          }
          acc += v * v;
        }
      }
    }
    (void)acc;
  }

  return report;
}

}  // namespace parabound
