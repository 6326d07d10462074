#pragma once

#include <functional>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/geometry.hpp"

namespace cvx {

/// Node-indexed real values bound to a grid.  Values at mask_boundary nodes
/// are Dirichlet data; solvers only ever write the free nodes.
struct ScalarField {
  const Grid* grid = nullptr;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(&g), v(g.size(), fill) {}

  static ScalarField sample(const Grid& g, const std::function<double(Vec2)>& f) {
    ScalarField out(g);
    for (int k = 0; k < g.size(); ++k) out.v[k] = f(g.coord(k));
    return out;
  }

  double& operator[](int k) { return v[k]; }
  double operator[](int k) const { return v[k]; }

  /// max over inside-Omega nodes of |u|.
  double sup_inside() const {
    double m = 0;
    for (int k = 0; k < grid->size(); ++k)
      if (grid->is_inside(k)) m = std::max(m, std::abs(v[k]));
    return m;
  }

  /// max over inside-Omega nodes of u.
  double max_inside() const {
    double m = -1e300;
    for (int k = 0; k < grid->size(); ++k)
      if (grid->is_inside(k)) m = std::max(m, v[k]);
    return m;
  }

  double min_inside() const {
    double m = 1e300;
    for (int k = 0; k < grid->size(); ++k)
      if (grid->is_inside(k)) m = std::min(m, v[k]);
    return m;
  }
};

/// Per-interior-node discrete Hessian, its determinant and cofactor matrix.
struct HessianField {
  const Grid* grid = nullptr;
  std::vector<Sym2> m;     // D^2_h u, valid at interior nodes
  std::vector<double> det;
  std::vector<Sym2> cof;

  double min_det = 0;
  int argmin_det = -1;
  /// First interior node (row-major) where the matrix is not positive
  /// definite (det <= 0 or leading entry <= 0); -1 when strictly convex.
  int first_nonconvex = -1;

  bool positive_definite() const { return first_nonconvex < 0; }
};

}  // namespace cvx
