#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/kernels.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <functional>

using namespace gcol;

namespace {

// max_i |Lap_S s(x_i) - expected(x_i)| for the kernel interpolant s of `f` on the cloud.
double operator_error(const KernelSpec& spec, const PointCloud& cloud, const std::function<double(const Point&)>& f,
                      const std::function<double(const Point&)>& expected) {
    const auto n = static_cast<Index>(cloud.size());
    Vector values(n);
    Vector target(n);
    for (Index i = 0; i < n; ++i) {
        values(i) = f(cloud.points[static_cast<std::size_t>(i)]);
        target(i) = expected(cloud.points[static_cast<std::size_t>(i)]);
    }
    const Matrix gram = assemble_matrix(spec, cloud, cloud, KernelOperator::Value);
    const Matrix lap = assemble_matrix(spec, cloud, cloud, KernelOperator::SurfaceLaplacian);
    const Vector coeffs = gram.partialPivLu().solve(values);
    return (lap * coeffs - target).lpNorm<Eigen::Infinity>();
}

double angle(const Point& p) { return std::atan2(p.y(), p.x()); }

}  // namespace

TEST_CASE("surface Laplacian of an interpolated constant vanishes") {
    const auto one = [](const Point&) { return 1.0; };
    const auto zero = [](const Point&) { return 0.0; };
    CHECK(operator_error(KernelSpec::matern_sobolev(6.0, 3.0, 2), fill_surface(Circle{}, 48), one, zero) <= 1e-8);
    CHECK(operator_error(KernelSpec::matern_sobolev(6.0, 6.0, 2), fill_surface(Circle{}, 100), one, zero) <= 1e-8);
    CHECK(operator_error(KernelSpec::matern_sobolev(6.0, 1.0, 3), fill_surface(Sphere{}, 400), one, zero) <= 1e-8);
}

TEST_CASE("circle eigenfunctions cos k theta converge under refinement") {
    const KernelSpec spec = KernelSpec::matern_sobolev(6.0, 4.0, 2);
    for (int k = 1; k <= 4; ++k) {
        CAPTURE(k);
        const auto f = [k](const Point& p) { return std::cos(k * angle(p)); };
        const auto lap = [k](const Point& p) { return -k * k * std::cos(k * angle(p)); };
        const double coarse = operator_error(spec, fill_surface(Circle{}, 24), f, lap);
        const double fine = operator_error(spec, fill_surface(Circle{}, 48), f, lap);
        CHECK(fine < 0.5 * coarse);
        CHECK(fine <= 1e-6 * k * k);
    }
}

TEST_CASE("sphere degree-one harmonic converges under refinement") {
    const KernelSpec spec = KernelSpec::matern_sobolev(6.0, 3.0, 3);
    const auto f = [](const Point& p) { return p.z(); };
    const auto lap = [](const Point& p) { return -2.0 * p.z(); };
    const double e100 = operator_error(spec, fill_surface(Sphere{}, 100), f, lap);
    const double e200 = operator_error(spec, fill_surface(Sphere{}, 200), f, lap);
    const double e400 = operator_error(spec, fill_surface(Sphere{}, 400), f, lap);
    CHECK(e200 < 0.5 * e100);
    CHECK(e400 < 0.5 * e200);
    CHECK(e400 <= 1e-4);
}

TEST_CASE("surface Laplacian kernel formula") {
    // tr(H) - n^T H n - H_c (n . grad) against an independent projection of the bundle.
    const KernelSpec spec = KernelSpec::matern_sobolev(6.0, 2.0, 3);
    const Point x = Point(1.0, 2.0, 2.0) / 3.0;
    const Point y(0.1, -0.3, 0.4);
    const KernelDerivativeBundle k = kernel_eval(spec, x, y);
    const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - x * x.transpose();
    const double expected = (proj * k.hessian * proj).trace() - 2.0 * x.dot(k.gradient);
    CHECK(std::abs(surface_laplacian_kernel(spec, x, x, 2.0, y) - expected) <= 1e-12 * std::abs(expected));
    CHECK_THROWS(surface_laplacian_kernel(spec, x, 2.0 * x, 2.0, y));
}
