#include "cvx/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cvx {

BoundaryData BoundaryData::quadratic(Vec2 c) {
  return {
      [c](Vec2 x) { return 0.5 * (x - c).norm2(); },
      [c](Vec2 x) { return x - c; },
      [](Vec2) { return Sym2::identity(); },
  };
}

BoundaryData BoundaryData::affine(Vec2 a, double b) {
  return {
      [a, b](Vec2 x) { return a.dot(x) + b; },
      [a](Vec2) { return a; },
      [](Vec2) { return Sym2{}; },
  };
}

bool InnerShape::contains(Vec2 x) const {
  const Vec2 d = x - center;
  if (kind == Kind::Disk) return d.norm2() < radius * radius;
  return std::max(std::abs(d.x), std::abs(d.y)) < radius;
}

DefiningFunction DefiningFunction::disk(Vec2 c, double R) {
  return {
      [c, R](Vec2 x) { return ((x - c).norm2() - R * R) / (2 * R); },
      [c, R](Vec2 x) { return (x - c) * (1.0 / R); },
      1.0 / R,
  };
}

namespace {

// Strict containment of the inner shape in the open outer disk.
void check_containment(const DomainSpec& spec) {
  const InnerShape& in = spec.inner;
  if (in.radius <= 0) throw InvalidArgument("inner region radius must be positive");
  double reach;  // max distance from outer center to a point of closure(Omega_0)
  if (in.kind == InnerShape::Kind::Disk) {
    reach = (in.center - spec.center).norm() + in.radius;
  } else {
    reach = 0;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        const Vec2 corner = in.center + Vec2{sx * in.radius, sy * in.radius};
        reach = std::max(reach, (corner - spec.center).norm());
      }
  }
  if (!(reach < spec.radius))
    throw InvalidArgument("inner region is not strictly inside the domain");
}

}  // namespace

Grid build_grid(const DomainSpec& spec, int n_per_axis) {
  if (n_per_axis < 9) throw InvalidArgument("build_grid: n_per_axis must be >= 9");
  if (spec.radius <= 0) throw InvalidArgument("build_grid: domain radius must be positive");
  check_containment(spec);

  Grid g;
  g.n = n_per_axis;
  g.h = 2 * spec.radius / (n_per_axis - 1);
  g.origin = spec.center - Vec2{spec.radius, spec.radius};
  g.domain_center = spec.center;
  g.domain_radius = spec.radius;
  g.cls.assign(g.size(), NodeClass::Outside);
  g.inner.assign(g.size(), 0);
  g.qw.assign(g.size(), 0.0);

  const double r2 = spec.radius * spec.radius;
  auto inside = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= g.n || j >= g.n) return false;
    return (g.coord(g.id(i, j)) - spec.center).norm2() < r2;
  };

  // Classify: interior nodes have all 8 stencil neighbours inside Omega.
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      if (!inside(i, j)) continue;
      bool all_nb = true;
      for (int dj = -1; dj <= 1 && all_nb; ++dj)
        for (int di = -1; di <= 1; ++di)
          if ((di || dj) && !inside(i + di, j + dj)) {
            all_nb = false;
            break;
          }
      const int k = g.id(i, j);
      g.cls[k] = all_nb ? NodeClass::Interior : NodeClass::Boundary;
      g.qw[k] = g.h * g.h;
    }

  for (int k = 0; k < g.size(); ++k) {
    if (g.cls[k] == NodeClass::Interior)
      g.interior_nodes.push_back(k);
    else if (g.cls[k] == NodeClass::Boundary)
      g.boundary_nodes.push_back(k);
  }

  for (int k = 0; k < g.size(); ++k) {
    if (!g.is_inside(k) || !spec.inner.contains(g.coord(k))) continue;
    if (g.cls[k] != NodeClass::Interior)
      throw ResolutionTooCoarse("inner mask touches the Dirichlet layer; refine the grid");
    g.inner[k] = 1;
    g.inner_nodes.push_back(k);
  }
  if (g.inner_nodes.empty())
    throw ResolutionTooCoarse("inner mask is empty at this resolution");

  // Convexity of the boundary data, checked at every inside node.
  for (int k = 0; k < g.size(); ++k) {
    if (!g.is_inside(k)) continue;
    if (spec.phi.hessian(g.coord(k)).eig_min() < -1e-12)
      throw InvalidArgument("boundary data phi is not convex at a grid node");
  }

  return g;
}

std::function<double(Vec2)> lifted_boundary(const DomainSpec& spec, const DefiningFunction& rho,
                                            double eps, int dim) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("lifted_boundary: eps must be in (0,1)");
  if (dim < 2) throw InvalidArgument("lifted_boundary: dimension must be >= 2");
  const double lift = std::pow(eps, 1.0 / (3.0 * dim * dim));
  auto phi = spec.phi.value;
  auto r = rho.value;
  return [phi, r, lift](Vec2 x) { return phi(x) + lift * (std::exp(r(x)) - 1.0); };
}

std::vector<int> compact_subset_mask(const Grid& grid, double margin) {
  if (margin < 2 * grid.h)
    throw InvalidArgument("compact_subset_mask: margin must be >= 2h");
  // At margin >= R the continuum set {dist >= margin} has empty interior;
  // a sup-error measured there is meaningless even if the center node ties.
  if (margin >= grid.domain_radius)
    throw EmptyMask("compact subset mask is degenerate at this margin");
  std::vector<int> mask;
  for (int k = 0; k < grid.size(); ++k)
    if (grid.is_inside(k) && grid.dist_to_boundary(k) >= margin) mask.push_back(k);
  if (mask.empty()) throw EmptyMask("compact subset mask is empty at this margin");
  return mask;
}

// ── helpers from common.hpp ──────────────────────────────────────────────

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
  return out;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cvx
