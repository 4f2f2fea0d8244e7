#include "greedy_colloc/geometry.hpp"

#include "greedy_colloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace gcol {
namespace {

constexpr std::array<int, 6> kPrimes = {2, 3, 5, 7, 11, 13};
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOnSurfaceTolerance = 1e-8;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double radical_inverse(std::size_t index, int base) {
    double inverse_base = 1.0 / base;
    double factor = inverse_base;
    double result = 0.0;
    while (index > 0) {
        result += factor * static_cast<double>(index % base);
        index /= base;
        factor *= inverse_base;
    }
    return result;
}

void check_torus(const Torus& t) {
    if (!(t.minor > 0.0) || !(t.minor < t.major)) {
        throw DomainError("torus requires 0 < minor radius < major radius");
    }
}

void check_cyclide(const DupinCyclide& cy) {
    if (!(cy.b > 0.0 && cy.b < cy.a)) throw DomainError("cyclide requires 0 < b < a");
    if (!(cy.c() < cy.d && cy.d < cy.a)) throw DomainError("ring cyclide requires c < d < a");
}

Point cyclide_point(const DupinCyclide& cy, double u, double v) {
    const double c = cy.c();
    const double denom = cy.a - c * std::cos(u) * std::cos(v);
    return {(cy.d * (c - cy.a * std::cos(u) * std::cos(v)) + cy.b * cy.b * std::cos(u)) / denom,
            cy.b * std::sin(u) * (cy.a - cy.d * std::cos(v)) / denom,
            cy.b * std::sin(v) * (c * std::cos(u) - cy.d) / denom};
}

PointCloud surface_cloud_from(std::vector<Point> points, const SurfaceGeometry& geom) {
    PointCloud cloud;
    cloud.dim = surface_dimension(geom);
    cloud.points = std::move(points);
    cloud.normals.reserve(cloud.points.size());
    cloud.mean_curvatures.reserve(cloud.points.size());
    for (const auto& p : cloud.points) {
        const SurfaceData data = implicit_surface_data(geom, p);
        cloud.normals.push_back(data.normal);
        cloud.mean_curvatures.push_back(data.mean_curvature);
    }
    cloud.labels.assign(cloud.points.size(), PointLabel::Boundary);
    return cloud;
}

struct Box {
    Point lo;
    Point hi;
};

Box bounding_box(const BulkDomain& domain) {
    return std::visit(
        Overloaded{
            [](const UnitSquare&) { return Box{{0, 0, 0}, {1, 1, 0}}; },
            [](const UnitCube&) { return Box{{0, 0, 0}, {1, 1, 1}}; },
            [](const UnitDisk&) { return Box{{-1, -1, 0}, {1, 1, 0}}; },
            [](const TorusInterior& t) {
                check_torus(t.torus);
                const double w = t.torus.major + t.torus.minor;
                return Box{{-w, -w, -t.torus.minor}, {w, w, t.torus.minor}};
            },
            [](const EllipsoidInterior& e) {
                const auto& el = e.ellipsoid;
                return Box{{-el.a, -el.b, -el.c}, {el.a, el.b, el.c}};
            },
            [](const CyclideInterior& c) {
                check_cyclide(c.cyclide);
                Point lo = Point::Constant(1e300);
                Point hi = Point::Constant(-1e300);
                constexpr int samples = 256;
                for (int i = 0; i < samples; ++i) {
                    for (int j = 0; j < samples; ++j) {
                        const Point p = cyclide_point(c.cyclide, kTwoPi * i / samples, kTwoPi * j / samples);
                        lo = lo.cwiseMin(p);
                        hi = hi.cwiseMax(p);
                    }
                }
                const Point pad = 0.01 * (hi - lo);
                return Box{lo - pad, hi + pad};
            },
        },
        domain);
}

}  // namespace

void PointCloud::validate() const {
    const std::size_t n = points.size();
    if (labels.size() != n) throw GeometryError("label count does not match point count");
    if (!normals.empty() && normals.size() != n) throw GeometryError("normal count does not match point count");
    if (!mean_curvatures.empty() && mean_curvatures.size() != n) {
        throw GeometryError("curvature count does not match point count");
    }
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-10) {
            throw GeometryError("normal at point " + std::to_string(i) + " is not unit length");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if ((points[i] - points[j]).squaredNorm() == 0.0) {
                throw GeometryError("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
            }
        }
    }
}

PointCloud PointCloud::subset(const IndexList& indices) const {
    PointCloud out;
    out.dim = dim;
    for (Index i : indices) {
        out.points.push_back(points.at(static_cast<std::size_t>(i)));
        out.labels.push_back(labels.at(static_cast<std::size_t>(i)));
        if (has_normals()) out.normals.push_back(normals[static_cast<std::size_t>(i)]);
        if (has_curvatures()) out.mean_curvatures.push_back(mean_curvatures[static_cast<std::size_t>(i)]);
    }
    return out;
}

PointCloud PointCloud::concat(const PointCloud& first, const PointCloud& second) {
    if (!first.empty() && !second.empty() && first.dim != second.dim) {
        throw GeometryError("cannot concatenate point clouds of different dimension");
    }
    PointCloud out;
    out.dim = first.empty() ? second.dim : first.dim;
    out.points = first.points;
    out.points.insert(out.points.end(), second.points.begin(), second.points.end());
    out.labels = first.labels;
    out.labels.insert(out.labels.end(), second.labels.begin(), second.labels.end());
    const bool keep_normals = (first.has_normals() || first.empty()) && (second.has_normals() || second.empty());
    if (keep_normals && (first.has_normals() || second.has_normals())) {
        out.normals = first.normals;
        out.normals.insert(out.normals.end(), second.normals.begin(), second.normals.end());
    }
    const bool keep_curv =
        (first.has_curvatures() || first.empty()) && (second.has_curvatures() || second.empty());
    if (keep_curv && (first.has_curvatures() || second.has_curvatures())) {
        out.mean_curvatures = first.mean_curvatures;
        out.mean_curvatures.insert(out.mean_curvatures.end(), second.mean_curvatures.begin(),
                                   second.mean_curvatures.end());
    }
    return out;
}

std::vector<double> halton(std::size_t index, int dim) {
    if (dim < 1 || dim > static_cast<int>(kPrimes.size())) throw DomainError("halton supports 1 <= dim <= 6");
    std::vector<double> out(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] = radical_inverse(index, kPrimes[static_cast<std::size_t>(k)]);
    return out;
}

double DupinCyclide::c() const { return std::sqrt(a * a - b * b); }

int surface_dimension(const SurfaceGeometry& geom) {
    return std::visit(Overloaded{
                          [](const Circle&) { return 2; },
                          [](const SquareBoundary&) { return 2; },
                          [](const auto&) { return 3; },
                      },
                      geom);
}

std::string surface_name(const SurfaceGeometry& geom) {
    return std::visit(Overloaded{
                          [](const Circle&) { return std::string("circle"); },
                          [](const Sphere&) { return std::string("sphere"); },
                          [](const Torus&) { return std::string("torus"); },
                          [](const Ellipsoid&) { return std::string("ellipsoid"); },
                          [](const DupinCyclide&) { return std::string("cyclide"); },
                          [](const SquareBoundary&) { return std::string("square-boundary"); },
                      },
                      geom);
}

double implicit_value(const SurfaceGeometry& geom, const Point& x) {
    return std::visit(
        Overloaded{
            [&](const Circle& c) { return x.head<2>().squaredNorm() - c.radius * c.radius; },
            [&](const Sphere& s) { return x.squaredNorm() - s.radius * s.radius; },
            [&](const Torus& t) {
                const double s = x.squaredNorm() + t.major * t.major - t.minor * t.minor;
                return s * s - 4.0 * t.major * t.major * (x.x() * x.x() + x.y() * x.y());
            },
            [&](const Ellipsoid& e) {
                return x.x() * x.x() / (e.a * e.a) + x.y() * x.y() / (e.b * e.b) + x.z() * x.z() / (e.c * e.c) - 1.0;
            },
            [&](const DupinCyclide& cy) {
                const double s = x.squaredNorm() + cy.b * cy.b - cy.d * cy.d;
                const double lin = cy.a * x.x() - cy.c() * cy.d;
                return s * s - 4.0 * lin * lin - 4.0 * cy.b * cy.b * x.y() * x.y();
            },
            [&](const SquareBoundary&) -> double {
                // Signed distance-like: negative inside the unit square.
                const double dx = std::max(-x.x(), x.x() - 1.0);
                const double dy = std::max(-x.y(), x.y() - 1.0);
                return std::max(dx, dy);
            },
        },
        geom);
}

Point implicit_gradient(const SurfaceGeometry& geom, const Point& x) {
    return std::visit(
        Overloaded{
            [&](const Circle&) { return Point(2.0 * x.x(), 2.0 * x.y(), 0.0); },
            [&](const Sphere&) { return Point(2.0 * x); },
            [&](const Torus& t) {
                const double s = x.squaredNorm() + t.major * t.major - t.minor * t.minor;
                const double r2 = t.major * t.major;
                return Point(4.0 * s * x.x() - 8.0 * r2 * x.x(), 4.0 * s * x.y() - 8.0 * r2 * x.y(), 4.0 * s * x.z());
            },
            [&](const Ellipsoid& e) {
                return Point(2.0 * x.x() / (e.a * e.a), 2.0 * x.y() / (e.b * e.b), 2.0 * x.z() / (e.c * e.c));
            },
            [&](const DupinCyclide& cy) {
                const double s = x.squaredNorm() + cy.b * cy.b - cy.d * cy.d;
                const double lin = cy.a * x.x() - cy.c() * cy.d;
                return Point(4.0 * s * x.x() - 8.0 * cy.a * lin, 4.0 * s * x.y() - 8.0 * cy.b * cy.b * x.y(),
                             4.0 * s * x.z());
            },
            [&](const SquareBoundary&) -> Point {
                throw GeometryError("the square boundary has no smooth implicit gradient");
            },
        },
        geom);
}

Eigen::Matrix3d implicit_hessian(const SurfaceGeometry& geom, const Point& x) {
    return std::visit(
        Overloaded{
            [&](const Circle&) {
                Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
                h(0, 0) = h(1, 1) = 2.0;
                return h;
            },
            [&](const Sphere&) { return Eigen::Matrix3d(2.0 * Eigen::Matrix3d::Identity()); },
            [&](const Torus& t) {
                const double s = x.squaredNorm() + t.major * t.major - t.minor * t.minor;
                Eigen::Matrix3d h = 8.0 * x * x.transpose() + 4.0 * s * Eigen::Matrix3d::Identity();
                h(0, 0) -= 8.0 * t.major * t.major;
                h(1, 1) -= 8.0 * t.major * t.major;
                return h;
            },
            [&](const Ellipsoid& e) {
                return Eigen::Matrix3d(Point(2.0 / (e.a * e.a), 2.0 / (e.b * e.b), 2.0 / (e.c * e.c)).asDiagonal());
            },
            [&](const DupinCyclide& cy) {
                const double s = x.squaredNorm() + cy.b * cy.b - cy.d * cy.d;
                Eigen::Matrix3d h = 8.0 * x * x.transpose() + 4.0 * s * Eigen::Matrix3d::Identity();
                h(0, 0) -= 8.0 * cy.a * cy.a;
                h(1, 1) -= 8.0 * cy.b * cy.b;
                return h;
            },
            [&](const SquareBoundary&) -> Eigen::Matrix3d {
                throw GeometryError("the square boundary has no smooth implicit Hessian");
            },
        },
        geom);
}

SurfaceData implicit_surface_data(const SurfaceGeometry& geom, const Point& x) {
    if (std::holds_alternative<SquareBoundary>(geom)) {
        throw GeometryError("the square boundary has no smooth normal field");
    }
    const double f = implicit_value(geom, x);
    if (std::abs(f) > kOnSurfaceTolerance) {
        throw GeometryError("point is off the surface (|F| = " + std::to_string(std::abs(f)) + ")");
    }
    const Point g = implicit_gradient(geom, x);
    const double gnorm = g.norm();
    if (gnorm < 1e-12) throw GeometryError("surface normal undefined: |grad F| < 1e-12");
    const Eigen::Matrix3d h = implicit_hessian(geom, x);
    const double mean_curvature = (h.trace() * gnorm * gnorm - g.dot(h * g)) / (gnorm * gnorm * gnorm);
    return {g / gnorm, mean_curvature};
}

PointCloud fill_surface(const SurfaceGeometry& geom, std::size_t count) {
    if (count < 1) throw DomainError("fill_surface requires count >= 1");
    if (std::holds_alternative<SquareBoundary>(geom)) {
        if (count % 4 != 0) throw DomainError("square boundary point count must be a multiple of 4");
        return square_boundary_ring(count / 4);
    }
    std::vector<Point> pts;
    pts.reserve(count);
    std::visit(Overloaded{
                   [&](const Circle& c) {
                       for (std::size_t k = 0; k < count; ++k) {
                           const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
                           pts.emplace_back(c.radius * std::cos(theta), c.radius * std::sin(theta), 0.0);
                       }
                   },
                   [&](const Sphere& s) {
                       for (std::size_t i = 1; i <= count; ++i) {
                           const auto h = halton(i, 2);
                           const double z = 1.0 - 2.0 * h[0];
                           const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                           const double phi = kTwoPi * h[1];
                           pts.emplace_back(s.radius * rho * std::cos(phi), s.radius * rho * std::sin(phi), s.radius * z);
                       }
                   },
                   [&](const Torus& t) {
                       check_torus(t);
                       for (std::size_t i = 1; i <= count; ++i) {
                           const auto h = halton(i, 2);
                           const double theta = kTwoPi * h[0];
                           const double phi = kTwoPi * h[1];
                           const double ring = t.major + t.minor * std::cos(phi);
                           pts.emplace_back(ring * std::cos(theta), ring * std::sin(theta), t.minor * std::sin(phi));
                       }
                   },
                   [&](const Ellipsoid& e) {
                       for (std::size_t i = 1; i <= count; ++i) {
                           const auto h = halton(i, 2);
                           const double z = 1.0 - 2.0 * h[0];
                           const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                           const double phi = kTwoPi * h[1];
                           Point p(e.a * rho * std::cos(phi), e.b * rho * std::sin(phi), e.c * z);
                           // Pull back onto the level set to remove rounding drift.
                           const double scale = std::sqrt(1.0 + implicit_value(geom, p));
                           pts.push_back(p / scale);
                       }
                   },
                   [&](const DupinCyclide& cy) {
                       check_cyclide(cy);
                       for (std::size_t i = 1; i <= count; ++i) {
                           const auto h = halton(i, 2);
                           pts.push_back(cyclide_point(cy, kTwoPi * h[0], kTwoPi * h[1]));
                       }
                   },
                   [&](const SquareBoundary&) {},
               },
               geom);
    return surface_cloud_from(std::move(pts), geom);
}

PointCloud square_boundary_ring(std::size_t per_side) {
    if (per_side < 1) throw DomainError("square boundary ring needs at least one point per side");
    PointCloud cloud;
    cloud.dim = 2;
    const double h = 1.0 / static_cast<double>(per_side);
    const double diag = std::sqrt(0.5);
    struct Side {
        Point start;
        Point step;
        Point normal;
        Point corner_normal;
    };
    const std::array<Side, 4> sides = {{
        {{0, 0, 0}, {h, 0, 0}, {0, -1, 0}, {-diag, -diag, 0}},
        {{1, 0, 0}, {0, h, 0}, {1, 0, 0}, {diag, -diag, 0}},
        {{1, 1, 0}, {-h, 0, 0}, {0, 1, 0}, {diag, diag, 0}},
        {{0, 1, 0}, {0, -h, 0}, {-1, 0, 0}, {-diag, diag, 0}},
    }};
    for (const auto& side : sides) {
        for (std::size_t i = 0; i < per_side; ++i) {
            cloud.points.push_back(side.start + static_cast<double>(i) * side.step);
            cloud.normals.push_back(i == 0 ? side.corner_normal : side.normal);
            cloud.mean_curvatures.push_back(0.0);
            cloud.labels.push_back(PointLabel::Boundary);
        }
    }
    return cloud;
}

PointCloud cube_boundary_grid(std::size_t per_side) {
    if (per_side < 1) throw DomainError("cube boundary grid needs at least one point per side");
    PointCloud cloud;
    cloud.dim = 3;
    const double h = 1.0 / static_cast<double>(per_side);
    for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3;
        const int v = (axis + 2) % 3;
        for (double side : {0.0, 1.0}) {
            Point normal = Point::Zero();
            normal[axis] = side == 0.0 ? -1.0 : 1.0;
            for (std::size_t i = 0; i < per_side; ++i) {
                for (std::size_t j = 0; j < per_side; ++j) {
                    Point p;
                    p[axis] = side;
                    p[u] = (static_cast<double>(i) + 0.5) * h;
                    p[v] = (static_cast<double>(j) + 0.5) * h;
                    cloud.points.push_back(p);
                    cloud.normals.push_back(normal);
                    cloud.mean_curvatures.push_back(0.0);
                    cloud.labels.push_back(PointLabel::Boundary);
                }
            }
        }
    }
    return cloud;
}

int domain_dimension(const BulkDomain& domain) {
    return std::visit(Overloaded{
                          [](const UnitSquare&) { return 2; },
                          [](const UnitDisk&) { return 2; },
                          [](const auto&) { return 3; },
                      },
                      domain);
}

bool domain_contains(const BulkDomain& domain, const Point& x) {
    return std::visit(Overloaded{
                          [&](const UnitSquare&) { return x.x() > 0 && x.x() < 1 && x.y() > 0 && x.y() < 1; },
                          [&](const UnitCube&) {
                              return (x.array() > 0.0).all() && (x.array() < 1.0).all();
                          },
                          [&](const UnitDisk&) { return x.head<2>().squaredNorm() < 1.0; },
                          [&](const TorusInterior& t) { return implicit_value(t.torus, x) < 0.0; },
                          [&](const EllipsoidInterior& e) { return implicit_value(e.ellipsoid, x) < 0.0; },
                          [&](const CyclideInterior& c) { return implicit_value(c.cyclide, x) < 0.0; },
                      },
                      domain);
}

PointCloud fill_bulk(const BulkDomain& domain, std::size_t count) {
    if (count < 1) throw DomainError("fill_bulk requires count >= 1");
    const Box box = bounding_box(domain);
    const int dim = domain_dimension(domain);
    PointCloud cloud;
    cloud.dim = dim;
    cloud.points.reserve(count);
    // Rejection rate is bounded for these domains; the cap guards against degenerate input.
    const std::size_t max_index = 1000 * count + 100000;
    for (std::size_t index = 1; cloud.points.size() < count; ++index) {
        if (index > max_index) throw GeometryError("bulk fill rejected too many Halton points");
        const auto h = halton(index, dim);
        Point p = Point::Zero();
        for (int k = 0; k < dim; ++k) p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * h[static_cast<std::size_t>(k)];
        if (domain_contains(domain, p)) cloud.points.push_back(p);
    }
    cloud.labels.assign(count, PointLabel::Interior);
    return cloud;
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
    const bool three = cloud.dim == 3;
    const bool with_normals = cloud.has_normals() && cloud.has_curvatures();
    out << (three ? "x,y,z,label" : "x,y,label");
    if (with_normals) out << (three ? ",nx,ny,nz,H" : ",nx,ny,H");
    out << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point& p = cloud.points[i];
        out << p.x() << ',' << p.y();
        if (three) out << ',' << p.z();
        out << ',' << (cloud.labels[i] == PointLabel::Interior ? "interior" : "boundary");
        if (with_normals) {
            const Point& n = cloud.normals[i];
            out << ',' << n.x() << ',' << n.y();
            if (three) out << ',' << n.z();
            out << ',' << cloud.mean_curvatures[i];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace gcol
