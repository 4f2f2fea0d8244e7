#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/geometry.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace gcol;
using gcol::test::rel_diff;

namespace {

constexpr double kPi = 3.14159265358979323846;

Point torus_point(const Torus& t, double theta, double phi) {
    const double ring = t.major + t.minor * std::cos(phi);
    return {ring * std::cos(theta), ring * std::sin(theta), t.minor * std::sin(phi)};
}

}  // namespace

TEST_CASE("halton radical inverses") {
    const auto p1 = halton(1, 2);
    CHECK(p1[0] == 0.5);
    CHECK(p1[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const auto p2 = halton(2, 2);
    CHECK(p2[0] == 0.25);
    CHECK(p2[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(halton(4, 1)[0] == 0.125);
    const auto p5 = halton(5, 3);
    CHECK(p5[0] == 0.625);
    CHECK(p5[1] == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
    CHECK(p5[2] == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("fill_bulk keeps the Halton order and the domain") {
    const PointCloud square = fill_bulk(UnitSquare{}, 3);
    REQUIRE(square.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto h = halton(i + 1, 2);
        CHECK(square.points[i].x() == h[0]);
        CHECK(square.points[i].y() == h[1]);
        CHECK(square.labels[i] == PointLabel::Interior);
    }

    const PointCloud disk = fill_bulk(UnitDisk{}, 100);
    REQUIRE(disk.size() == 100);
    for (const auto& p : disk.points) CHECK(p.head<2>().norm() < 1.0);
    const PointCloud disk_more = fill_bulk(UnitDisk{}, 101);
    for (std::size_t i = 0; i < 100; ++i) CHECK(disk_more.points[i] == disk.points[i]);

    const TorusInterior torus{};
    const PointCloud solid = fill_bulk(torus, 500);
    REQUIRE(solid.size() == 500);
    for (const auto& p : solid.points) CHECK(implicit_value(torus.torus, p) < 0.0);

    for (const BulkDomain& d : {BulkDomain{EllipsoidInterior{}}, BulkDomain{CyclideInterior{}}, BulkDomain{UnitCube{}}}) {
        const PointCloud cloud = fill_bulk(d, 200);
        CHECK(cloud.size() == 200);
        for (const auto& p : cloud.points) CHECK(domain_contains(d, p));
        CHECK_NOTHROW(cloud.validate());
    }
    CHECK_THROWS_AS(fill_bulk(TorusInterior{Torus{0.5, 0.5}}, 10), DomainError);
    CHECK_THROWS_AS(fill_bulk(UnitSquare{}, 0), DomainError);
}

TEST_CASE("fill_bulk and fill_surface are deterministic") {
    const PointCloud a = fill_surface(Torus{}, 300);
    const PointCloud b = fill_surface(Torus{}, 300);
    CHECK(a.points == b.points);
    CHECK(a.normals == b.normals);
    CHECK(a.mean_curvatures == b.mean_curvatures);
    CHECK(fill_bulk(CyclideInterior{}, 150).points == fill_bulk(CyclideInterior{}, 150).points);
}

TEST_CASE("circle samples") {
    const PointCloud c = fill_surface(Circle{}, 4);
    REQUIRE(c.size() == 4);
    const std::array<Point, 4> expected{Point(1, 0, 0), Point(0, 1, 0), Point(-1, 0, 0), Point(0, -1, 0)};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK((c.points[i] - expected[i]).norm() < 1e-15);
        CHECK((c.normals[i] - c.points[i]).norm() < 1e-15);
        CHECK(c.mean_curvatures[i] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.labels[i] == PointLabel::Boundary);
    }
}

TEST_CASE("implicit surface data on simple shapes") {
    const SurfaceData pole = implicit_surface_data(Sphere{}, Point(0, 0, 1));
    CHECK((pole.normal - Point(0, 0, 1)).norm() < 1e-15);
    CHECK(pole.mean_curvature == doctest::Approx(2.0).epsilon(1e-14));

    const SurfaceData right = implicit_surface_data(Circle{}, Point(1, 0, 0));
    CHECK((right.normal - Point(1, 0, 0)).norm() < 1e-15);
    CHECK(right.mean_curvature == doctest::Approx(1.0).epsilon(1e-14));

    // Principal curvatures at the pole of x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 from the second
    // fundamental form of the graph z = c sqrt(1 - x^2/a^2 - y^2/b^2): c/a^2 and c/b^2.
    const Ellipsoid e{1.0, 0.8, 0.6};
    const SurfaceData ep = implicit_surface_data(e, Point(0, 0, 0.6));
    CHECK((ep.normal - Point(0, 0, 1)).norm() < 1e-14);
    CHECK(rel_diff(ep.mean_curvature, e.c / (e.a * e.a) + e.c / (e.b * e.b)) < 1e-12);

    const Torus t{};
    const SurfaceData outer = implicit_surface_data(t, Point(1.5, 0, 0));
    CHECK(rel_diff(outer.mean_curvature, 2.0 + 2.0 / 3.0) < 1e-12);
    CHECK((outer.normal - Point(1, 0, 0)).norm() < 1e-14);

    CHECK_THROWS_AS(implicit_surface_data(Sphere{}, Point(0, 0, 1.1)), GeometryError);
}

TEST_CASE("mean curvature matches closed forms at 100 points") {
    auto gen = test::rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const Torus t{1.0, 0.5};
    const Sphere s{1.7};
    const Circle c{0.6};
    for (int i = 0; i < 100; ++i) {
        const double theta = angle(gen);
        const double phi = angle(gen);
        const SurfaceData td = implicit_surface_data(t, torus_point(t, theta, phi));
        const double expected = 1.0 / t.minor + std::cos(phi) / (t.major + t.minor * std::cos(phi));
        CHECK(rel_diff(td.mean_curvature, expected) < 1e-8);

        const Point sp = s.radius * Point(std::sin(phi / 2) * std::cos(theta), std::sin(phi / 2) * std::sin(theta),
                                          std::cos(phi / 2));
        CHECK(rel_diff(implicit_surface_data(s, sp).mean_curvature, 2.0 / s.radius) < 1e-8);

        const Point cp(c.radius * std::cos(theta), c.radius * std::sin(theta), 0.0);
        CHECK(rel_diff(implicit_surface_data(c, cp).mean_curvature, 1.0 / c.radius) < 1e-8);
    }
}

TEST_CASE("surface samples lie on their surfaces with unit normals") {
    const std::array<SurfaceGeometry, 5> shapes{Circle{}, Sphere{}, Torus{}, Ellipsoid{}, DupinCyclide{}};
    for (const auto& shape : shapes) {
        CAPTURE(surface_name(shape));
        const PointCloud cloud = fill_surface(shape, 400);
        REQUIRE(cloud.size() == 400);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            CHECK(std::abs(implicit_value(shape, cloud.points[i])) <= 1e-8);
            CHECK(std::abs(cloud.normals[i].norm() - 1.0) <= 1e-10);
            CHECK(implicit_gradient(shape, cloud.points[i]).dot(cloud.normals[i]) > 0.0);
        }
        CHECK_NOTHROW(cloud.validate());
    }
}

TEST_CASE("boundary sets of the unit square and cube") {
    const PointCloud ring = square_boundary_ring(5);
    CHECK(ring.size() == 20);
    CHECK_NOTHROW(ring.validate());
    for (const auto& p : ring.points) {
        const bool on_edge = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
        CHECK(on_edge);
    }
    const PointCloud cube = cube_boundary_grid(4);
    CHECK(cube.size() == 96);
    CHECK_NOTHROW(cube.validate());
}

TEST_CASE("PointCloud validation") {
    PointCloud cloud;
    cloud.points = {Point(0, 0, 0), Point(1, 0, 0)};
    cloud.labels = {PointLabel::Interior, PointLabel::Interior};
    CHECK_NOTHROW(cloud.validate());
    cloud.normals = {Point(1, 0, 0)};
    CHECK_THROWS_AS(cloud.validate(), GeometryError);
    cloud.normals = {Point(1, 0, 0), Point(2, 0, 0)};
    CHECK_THROWS_AS(cloud.validate(), GeometryError);
    cloud.normals.clear();
    cloud.points.push_back(Point(0, 0, 0));
    cloud.labels.push_back(PointLabel::Interior);
    CHECK_THROWS_AS(cloud.validate(), GeometryError);
}

TEST_CASE("point cloud csv header") {
    std::ostringstream out;
    write_point_cloud_csv(out, fill_surface(Circle{}, 2));
    const std::string text = out.str();
    CHECK(text.rfind("x,y,label,nx,ny,H\n", 0) == 0);
    std::ostringstream bulk;
    write_point_cloud_csv(bulk, fill_bulk(UnitCube{}, 2));
    CHECK(bulk.str().rfind("x,y,z,label\n", 0) == 0);
}
