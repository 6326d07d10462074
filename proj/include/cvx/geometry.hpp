#pragma once

#include <functional>
#include <vector>

#include "cvx/common.hpp"

namespace cvx {

/// Dirichlet data phi with gradient and Hessian callbacks.
struct BoundaryData {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  std::function<Sym2(Vec2)> hessian;

  /// phi(x) = |x - c|^2 / 2.
  static BoundaryData quadratic(Vec2 c = {0, 0});
  /// phi(x) = a . x + b.
  static BoundaryData affine(Vec2 a, double b);
};

/// Inner region Omega_0, strictly inside the outer disk.
struct InnerShape {
  enum class Kind { Disk, Square };
  Kind kind = Kind::Disk;
  Vec2 center{0, 0};
  double radius = 0.5;  // disk radius, or half side length for the square

  bool contains(Vec2 x) const;
};

/// Outer domain Omega (a disk, uniformly convex), the inner region, and the
/// boundary data.
struct DomainSpec {
  Vec2 center{0, 0};
  double radius = 1.0;
  InnerShape inner;
  BoundaryData phi = BoundaryData::quadratic();
};

/// Uniformly convex defining function of Omega: rho < 0 inside, rho = 0 and
/// D rho != 0 on the boundary.  For the disk: rho = (|x-c|^2 - R^2) / (2R),
/// so D^2 rho = I / R exactly.
struct DefiningFunction {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  double hessian_scale = 0;  // D^2 rho = hessian_scale * I

  static DefiningFunction disk(Vec2 c, double R);
};

enum class NodeClass : unsigned char { Outside = 0, Boundary = 1, Interior = 2 };

/// Masked Cartesian grid over the bounding box of Omega.
///
/// Nodes are ordered row-major (y outer, x inner).  mask_interior holds the
/// nodes strictly inside Omega whose 8 stencil neighbours are all inside;
/// mask_boundary is the remaining inside layer and acts as the Dirichlet
/// ring.  Quadrature weight is h^2 at every inside node, 0 outside.
struct Grid {
  int n = 0;
  double h = 0;
  Vec2 origin;          // coordinate of node (0, 0)
  Vec2 domain_center;   // outer disk parameters, kept for distance queries
  double domain_radius = 0;

  std::vector<NodeClass> cls;
  std::vector<char> inner;  // 1 iff node center lies in Omega_0
  std::vector<double> qw;

  std::vector<int> interior_nodes;
  std::vector<int> boundary_nodes;
  std::vector<int> inner_nodes;

  int size() const { return n * n; }
  int id(int i, int j) const { return j * n + i; }
  int ix(int id_) const { return id_ % n; }
  int iy(int id_) const { return id_ / n; }
  Vec2 coord(int id_) const { return {origin.x + h * ix(id_), origin.y + h * iy(id_)}; }

  bool is_inside(int id_) const { return cls[id_] != NodeClass::Outside; }
  bool is_interior(int id_) const { return cls[id_] == NodeClass::Interior; }
  bool is_boundary(int id_) const { return cls[id_] == NodeClass::Boundary; }

  /// Distance from a node to the outer boundary.
  double dist_to_boundary(int id_) const {
    return domain_radius - (coord(id_) - domain_center).norm();
  }
};

/// Builds the masked grid.  Throws InvalidArgument for n < 9 or an inner
/// region that is not strictly inside Omega, and ResolutionTooCoarse when
/// mask_inner is empty or escapes mask_interior.
Grid build_grid(const DomainSpec& spec, int n_per_axis);

/// The lifted boundary data  phi + eps^(1/(3 n^2)) (e^rho - 1)  as a callback;
/// equals phi exactly where rho = 0.  Requires eps in (0,1) and dim >= 2.
std::function<double(Vec2)> lifted_boundary(const DomainSpec& spec, const DefiningFunction& rho,
                                            double eps, int dim);

/// Nodes at distance >= margin from the outer boundary.  Requires
/// margin >= 2h; throws EmptyMask when no node qualifies.
std::vector<int> compact_subset_mask(const Grid& grid, double margin);

}  // namespace cvx
