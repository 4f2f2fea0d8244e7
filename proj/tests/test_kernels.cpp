#include "greedy_colloc/bessel.hpp"
#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/kernels.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <array>
#include <cmath>

using namespace gcol;
using gcol::test::rel_diff;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BesselCase {
    double nu;
    double r;
    double value;
};

// 40-digit values from an arbitrary-precision evaluation of K_nu.
constexpr std::array<BesselCase, 12> kBesselOracle{{
    {5.0, 1.0, 360.96058960124070066},
    {0.0, 0.5, 0.92441907122766586178},
    {1.0, 3.0, 0.040156431128194184377},
    {4.5, 2.0, 4.4302014520702697122},
    {5.0, 10.0, 5.7541849985312279276e-05},
    {0.0, 30.0, 2.1324774964630563712e-14},
    {2.0, 1e-3, 1999999.5000009716277},
    {3.0, 45.0, 5.8877828696835663687e-21},
    {5.5, 0.7, 8197.3861694804190774},
    {1.0, 1e-8, 99999999.999999902725},
    {0.0, 2.0, 0.11389387274953343565},
    {1.0, 2.0, 0.13986588181652242728},
}};

Point sample_point(std::mt19937_64& gen, int dim) {
    std::uniform_real_distribution<double> dist(-0.6, 0.6);
    Point p = Point::Zero();
    for (int k = 0; k < dim; ++k) p(k) = dist(gen);
    return p;
}

// Power series of I_nu; all terms are positive, so it is accurate for moderate r.
double bessel_i_series(double nu, double r) {
    const double q = 0.25 * r * r;
    double term = std::pow(0.5 * r, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 500 && term > 1e-18 * sum; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
    }
    return sum;
}

double value_along(const KernelSpec& spec, Point x, const Point& y, int axis, double t) {
    x(axis) += t;
    return kernel_value(spec, x, y);
}

}  // namespace

TEST_CASE("bessel_k matches closed forms of half-integer orders") {
    CHECK(rel_diff(bessel_k(0.5, 1.0), std::sqrt(kPi / 2.0) * std::exp(-1.0)) < 1e-14);
    CHECK(rel_diff(bessel_k(0.5, 1.0), 0.4610685055) < 1e-8);
    CHECK(rel_diff(bessel_k(1.5, 2.0), std::sqrt(kPi / 4.0) * std::exp(-2.0) * 1.5) < 1e-14);
    CHECK(rel_diff(bessel_k(1.5, 2.0), 0.1799066579) < 1e-9);
}

TEST_CASE("bessel_k agrees with high-precision values") {
    for (const auto& c : kBesselOracle) {
        CAPTURE(c.nu);
        CAPTURE(c.r);
        CHECK(rel_diff(bessel_k(c.nu, c.r), c.value) < 1e-12);
    }
}

TEST_CASE("bessel_k rejects bad arguments") {
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(bessel_k(0.3, 1.0), UnsupportedOrderError);
}

TEST_CASE("bessel_k satisfies the three-term recurrence and the Turan inequality") {
    const std::array<double, 9> radii{1e-3, 0.05, 0.4, 1.0, 1.99, 2.01, 7.5, 20.0, 48.0};
    for (double nu = 0.5; nu <= 7.0; nu += 0.5) {
        for (double r : radii) {
            CAPTURE(nu);
            CAPTURE(r);
            const double km = bessel_k(std::abs(nu - 1.0), r);
            const double k0 = bessel_k(nu, r);
            const double kp = bessel_k(nu + 1.0, r);
            CHECK(rel_diff(kp, km + (2.0 * nu / r) * k0) < 1e-10);
            CHECK(km * kp - k0 * k0 > 0.0);
        }
    }
}

TEST_CASE("bessel_k satisfies the Wronskian with the I_nu series") {
    for (double nu = 0.0; nu <= 7.0; nu += 0.5) {
        for (double r : {0.01, 0.3, 1.0, 1.99, 2.01, 5.0, 12.0, 25.0}) {
            CAPTURE(nu);
            CAPTURE(r);
            const double w = bessel_i_series(nu, r) * bessel_k(nu + 1.0, r) + bessel_i_series(nu + 1.0, r) * bessel_k(nu, r);
            CHECK(std::abs(w * r - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("bessel_k is continuous across the series/continued-fraction switch") {
    for (double nu : {0.0, 1.0, 4.0, 5.0}) {
        const double below = bessel_k(nu, 2.0 - 1e-9);
        const double above = bessel_k(nu, 2.0 + 1e-9);
        CHECK(rel_diff(below, above) < 1e-8);
    }
    CHECK(rel_diff(bessel_k(0.0, 2.0000001), 0.11389385876294619602) < 1e-12);
}

TEST_CASE("scaled_bessel_k has the Matern limit at zero") {
    for (double nu : {0.5, 1.0, 2.5, 4.0, 4.5, 5.0}) {
        CAPTURE(nu);
        const double limit = std::pow(2.0, nu - 1.0) * std::tgamma(nu);
        CHECK(rel_diff(scaled_bessel_k(nu, 0.0), limit) < 1e-14);
        CHECK(rel_diff(scaled_bessel_k(nu, 1e-7), limit) < 1e-6);
    }
    CHECK(std::isinf(scaled_bessel_k(0.0, 0.0)));
}

TEST_CASE("kernel diagonal values") {
    const KernelSpec ms2 = KernelSpec::matern_sobolev(6.0, 3.0, 2);
    const Point x(0.3, -0.2, 0.0);
    CHECK(kernel_value(ms2, x, x) == doctest::Approx(384.0).epsilon(1e-14));
    for (double mu : {3.5, 4.0, 5.5, 6.0}) {
        for (int dim : {2, 3}) {
            const KernelSpec spec = KernelSpec::matern_sobolev(mu, 1.7, dim);
            const double nu = spec.nu();
            CHECK(rel_diff(kernel_value(spec, x, x), std::pow(2.0, nu - 1.0) * std::tgamma(nu)) < 1e-14);
        }
    }
    const KernelSpec gauss = KernelSpec::gaussian(1.0, 2);
    CHECK(rel_diff(kernel_value(gauss, Point(1.0, 0.0, 0.0), Point::Zero()), std::exp(-1.0)) < 1e-15);
    CHECK(rel_diff(kernel_value(gauss, Point(1.0, 0.0, 0.0), Point::Zero()), 0.3678794412) < 1e-9);
}

TEST_CASE("KernelSpec validation") {
    CHECK_THROWS_AS(KernelSpec::matern_sobolev(1.0, 1.0, 2), DomainError);
    CHECK_THROWS_AS(KernelSpec::matern_sobolev(6.2, 1.0, 2), UnsupportedOrderError);
    CHECK_THROWS_AS(KernelSpec::matern_sobolev(6.0, 0.0, 2), DomainError);
    CHECK_THROWS_AS(KernelSpec::matern_sobolev(6.0, 1.0, 4), DomainError);
    CHECK_THROWS_AS(KernelSpec::gaussian(-1.0, 3), DomainError);
    CHECK_NOTHROW(KernelSpec::matern_sobolev(5.5, 6.0, 3));
}

TEST_CASE("kernel derivatives match Richardson finite differences") {
    auto gen = test::rng(20240611);
    std::uniform_real_distribution<double> eps_dist(0.5, 6.0);
    const std::array<double, 4> mus{3.5, 4.0, 5.5, 6.0};
    int checked = 0;
    for (int sample = 0; sample < 100; ++sample) {
        const int dim = sample % 2 == 0 ? 2 : 3;
        const double eps = eps_dist(gen);
        const KernelSpec spec = sample % 5 == 4 ? KernelSpec::gaussian(eps, dim)
                                                : KernelSpec::matern_sobolev(mus[sample % 4], eps, dim);
        const Point x = sample_point(gen, dim);
        const Point y = sample_point(gen, dim);
        const double r = eps * (x - y).norm();
        if (r < 0.05) continue;
        ++checked;
        const KernelDerivativeBundle k = kernel_eval(spec, x, y);
        const double h = 0.02 / eps;
        CAPTURE(sample);
        CHECK(rel_diff(k.value, kernel_value(spec, x, y)) < 1e-14);

        const double grad_scale = std::max(k.gradient.norm(), 1e-3 * std::abs(k.value) * eps);
        for (int a = 0; a < dim; ++a) {
            const double fd = test::richardson_derivative(
                [&](double t) { return value_along(spec, x, y, a, t); }, 0.0, h);
            CHECK(std::abs(fd - k.gradient(a)) <= 1e-6 * grad_scale);
        }
        const double hess_scale = std::max(k.hessian.norm(), 1e-3 * std::abs(k.value) * eps * eps);
        double fd_laplacian = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double fd_aa = test::richardson_second_derivative(
                [&](double t) { return value_along(spec, x, y, a, t); }, 0.0, h);
            fd_laplacian += fd_aa;
            CHECK(std::abs(fd_aa - k.hessian(a, a)) <= 1e-6 * hess_scale);
            for (int b = 0; b < dim; ++b) {
                if (b == a) continue;
                const double fd_ab = test::richardson_derivative(
                    [&](double t) {
                        Point xs = x;
                        xs(b) += t;
                        return kernel_eval(spec, xs, y).gradient(a);
                    },
                    0.0, h);
                CHECK(std::abs(fd_ab - k.hessian(a, b)) <= 1e-6 * hess_scale);
            }
        }
        CHECK(std::abs(fd_laplacian - k.laplacian) <= 1e-6 * hess_scale);
    }
    CHECK(checked >= 90);
}

TEST_CASE("kernel bundle invariants") {
    auto gen = test::rng(7);
    for (int sample = 0; sample < 200; ++sample) {
        const int dim = 2 + sample % 2;
        const KernelSpec spec = sample % 3 == 0 ? KernelSpec::gaussian(2.0, dim)
                                                : KernelSpec::matern_sobolev(sample % 2 ? 5.5 : 6.0, 3.0, dim);
        const Point x = sample_point(gen, dim);
        const Point y = sample_point(gen, dim);
        const KernelDerivativeBundle kx = kernel_eval(spec, x, y);
        const KernelDerivativeBundle ky = kernel_eval(spec, y, x);
        CHECK(kx.value == ky.value);
        CHECK((kx.gradient + ky.gradient).norm() <= 1e-14 * (1.0 + kx.gradient.norm()));
        CHECK((kx.hessian - kx.hessian.transpose()).norm() <= 1e-12 * (1.0 + kx.hessian.norm()));
        CHECK(std::abs(kx.laplacian - kx.hessian.trace()) <= 1e-12 * (1.0 + std::abs(kx.laplacian)));
    }
}

TEST_CASE("MS derivatives at coincident points are the analytic limits") {
    for (int dim : {2, 3}) {
        const KernelSpec spec = KernelSpec::matern_sobolev(6.0, 3.0, dim);
        const Point x(0.1, 0.2, dim == 3 ? 0.3 : 0.0);
        const KernelDerivativeBundle at = kernel_eval(spec, x, x);
        Point offset = Point::Zero();
        offset(0) = 1e-5;
        const KernelDerivativeBundle near = kernel_eval(spec, x + offset, x);
        CHECK(at.gradient.norm() == 0.0);
        CHECK(rel_diff(at.laplacian, near.laplacian) < 1e-6);
        CHECK((at.hessian - near.hessian).norm() <= 1e-6 * at.hessian.norm());
        CHECK(std::abs(at.laplacian - at.hessian.trace()) <= 1e-12 * std::abs(at.laplacian));
    }
    const KernelSpec rough = KernelSpec::matern_sobolev(1.5, 1.0, 2);
    CHECK_THROWS_AS(kernel_eval(rough, Point::Zero(), Point::Zero()), DomainError);
}

TEST_CASE("MS kernel in 3D at unit distance against the finite-difference oracle") {
    const KernelSpec spec = KernelSpec::matern_sobolev(6.0, 3.0, 3);
    const Point y = Point::Zero();
    const Point x(0.6, 0.0, 0.8);
    const KernelDerivativeBundle k = kernel_eval(spec, x, y);
    const double radial = test::richardson_derivative(
        [&](double t) { return kernel_value(spec, x * (1.0 + t), y); }, 0.0, 1e-3);
    CHECK(rel_diff(k.gradient.dot(x), radial) < 1e-8);
    CHECK(rel_diff(kernel_value(spec, x, y), std::pow(3.0, 4.5) * bessel_k(4.5, 3.0)) < 1e-14);
}

TEST_CASE("assembled matrices") {
    PointCloud five;
    for (std::size_t i = 1; i <= 5; ++i) {
        const auto h = halton(i, 2);
        five.points.emplace_back(h[0], h[1], 0.0);
    }
    const KernelSpec ms = KernelSpec::matern_sobolev(6.0, 3.0, 2);
    const Matrix a = assemble_matrix(ms, five, five, KernelOperator::Value);
    CHECK((a - a.transpose()).norm() == 0.0);
    for (Index i = 0; i < 5; ++i) CHECK(a(i, i) == kernel_value(ms, five.points[0], five.points[0]));

    const PointCloud twenty = fill_bulk(UnitSquare{}, 20);
    const Matrix g = assemble_matrix(KernelSpec::gaussian(3.0, 2), twenty, twenty, KernelOperator::Value);
    Eigen::LLT<Matrix> llt(g);
    CHECK(llt.info() == Eigen::Success);

    const Matrix lap = assemble_matrix(ms, twenty, five, KernelOperator::Laplacian);
    const std::array<std::pair<Index, Index>, 5> picks{{{0, 1}, {3, 4}, {7, 2}, {12, 0}, {19, 3}}};
    for (auto [i, j] : picks) {
        const Point& x = twenty.points[static_cast<std::size_t>(i)];
        const Point& y = five.points[static_cast<std::size_t>(j)];
        double fd = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            fd += test::richardson_second_derivative([&](double t) { return value_along(ms, x, y, axis, t); }, 0.0,
                                                     5e-3);
        }
        CHECK(rel_diff(lap(i, j), fd) < 1e-6);
    }

    try {
        assemble_matrix(ms, twenty, five, KernelOperator::NormalDerivative);
        FAIL("missing normals must raise");
    } catch (const AssemblyError& e) {
        CHECK(std::string(e.what()).find("row 0") != std::string::npos);
    }
}
