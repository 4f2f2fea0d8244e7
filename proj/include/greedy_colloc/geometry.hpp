#pragma once

#include "greedy_colloc/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <variant>

namespace gcol {

enum class PointLabel { Interior, Boundary };

/// Ordered point set with optional unit normals and mean curvatures.
///
/// `normals` and `mean_curvatures` are either empty or have one entry per point.
struct PointCloud {
    int dim = 2;
    std::vector<Point> points;
    std::vector<Point> normals;
    std::vector<double> mean_curvatures;
    std::vector<PointLabel> labels;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_normals() const { return !normals.empty(); }
    bool has_curvatures() const { return !mean_curvatures.empty(); }

    /// Throws GeometryError if list lengths disagree, a normal is not unit length,
    /// or two points coincide.
    void validate() const;

    PointCloud subset(const IndexList& indices) const;

    /// Points of `first` followed by points of `second`. Normals/curvatures are kept only
    /// when both clouds carry them.
    static PointCloud concat(const PointCloud& first, const PointCloud& second);
};

/// Radical-inverse Halton point for `index >= 1` using the first `dim` primes.
std::vector<double> halton(std::size_t index, int dim);

// --- Surfaces -------------------------------------------------------------------------

struct Circle {
    double radius = 1.0;
};
struct Sphere {
    double radius = 1.0;
};
/// Ring torus around the z axis: tube radius `minor` < `major`.
struct Torus {
    double major = 1.0;
    double minor = 0.5;
};
struct Ellipsoid {
    double a = 1.0;
    double b = 0.8;
    double c = 0.6;
};
/// Dupin ring cyclide (x^2+y^2+z^2+b^2-d^2)^2 = 4(ax-cd)^2 + 4b^2 y^2 with c^2 = a^2-b^2.
struct DupinCyclide {
    double a = 1.0;
    double b = 0.9;
    double d = 0.6;
    double c() const;
};
/// Boundary of the unit square; not smooth, so it only supplies Dirichlet points.
struct SquareBoundary {};

using SurfaceGeometry = std::variant<Circle, Sphere, Torus, Ellipsoid, DupinCyclide, SquareBoundary>;

int surface_dimension(const SurfaceGeometry& geom);
std::string surface_name(const SurfaceGeometry& geom);

/// Implicit function F (negative inside), its gradient and Hessian.
double implicit_value(const SurfaceGeometry& geom, const Point& x);
Point implicit_gradient(const SurfaceGeometry& geom, const Point& x);
Eigen::Matrix3d implicit_hessian(const SurfaceGeometry& geom, const Point& x);

struct SurfaceData {
    Point normal;
    double mean_curvature;
};

/// Outward unit normal grad F/|grad F| and mean curvature div(n) (sum of principal
/// curvatures, positive on spheres). Requires |F(x)| <= 1e-8.
SurfaceData implicit_surface_data(const SurfaceGeometry& geom, const Point& x);

/// `count` surface points from low-discrepancy parameter samples, labelled Boundary and
/// carrying normals and mean curvatures.
PointCloud fill_surface(const SurfaceGeometry& geom, std::size_t count);

/// Uniformly spaced ring on the unit square boundary with `per_side` points on each side.
/// Corner points carry the diagonal normal.
PointCloud square_boundary_ring(std::size_t per_side);

/// Boundary of the unit cube: a `per_side` x `per_side` cell-centred grid on each face with
/// the face normal.
PointCloud cube_boundary_grid(std::size_t per_side);

// --- Bulk domains ---------------------------------------------------------------------

struct UnitSquare {};
struct UnitCube {};
struct UnitDisk {};
struct TorusInterior {
    Torus torus;
};
struct EllipsoidInterior {
    Ellipsoid ellipsoid;
};
struct CyclideInterior {
    DupinCyclide cyclide;
};

using BulkDomain = std::variant<UnitSquare, UnitCube, UnitDisk, TorusInterior, EllipsoidInterior, CyclideInterior>;

int domain_dimension(const BulkDomain& domain);
bool domain_contains(const BulkDomain& domain, const Point& x);

/// First `count` Halton points of the domain's bounding box that fall strictly inside.
PointCloud fill_bulk(const BulkDomain& domain, std::size_t count);

/// CSV with header `x,y[,z],label[,nx,ny[,nz],H]`.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace gcol
