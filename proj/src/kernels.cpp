#include "greedy_colloc/kernels.hpp"

#include "greedy_colloc/bessel.hpp"
#include "greedy_colloc/errors.hpp"

#include <cmath>
#include <string>

namespace gcol {
namespace {

// For Phi(x) = f(|x|), derivatives take the form
//   grad = d1 * x,   Hess = d1 * I_d + d2 * x x^T,
// with d1 = f'(r)/r and d2 = (f''(r) - f'(r)/r)/r^2. These stay finite at r = 0.
struct RadialTerms {
    double value;
    double d1;
    double d2;
};

void check_normal(const Point& normal, Index row) {
    if (std::abs(normal.norm() - 1.0) > 1e-10) {
        throw DomainError("normal at row " + std::to_string(row) + " is not unit length");
    }
}

RadialTerms radial_terms(const KernelSpec& spec, double r2) {
    const double eps2 = spec.epsilon * spec.epsilon;
    if (spec.family == KernelFamily::Gaussian) {
        const double g = std::exp(-eps2 * r2);
        return {g, -2.0 * eps2 * g, 4.0 * eps2 * eps2 * g};
    }
    const double nu = spec.nu();
    const double s = spec.epsilon * std::sqrt(r2);
    if (s == 0.0) {
        if (!(nu > 1.0)) {
            throw DomainError("Matern-Sobolev kernel with nu = " + std::to_string(nu) +
                              " has no second derivatives at the origin");
        }
        // d2 multiplies x x^T = 0 here.
        return {scaled_bessel_k(nu, 0.0), -eps2 * scaled_bessel_k(nu - 1.0, 0.0), 0.0};
    }
    // phi_nu'(s) = -s phi_(nu-1)(s)
    return {scaled_bessel_k(nu, s), -eps2 * scaled_bessel_k(nu - 1.0, s),
            eps2 * eps2 * scaled_bessel_k(nu - 2.0, s)};
}

Eigen::Matrix3d spatial_identity(int dim) {
    Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    if (dim == 2) id(2, 2) = 0.0;
    return id;
}

Point planar(const KernelSpec& spec, Point diff) {
    if (spec.dim == 2) diff.z() = 0.0;
    return diff;
}

double laplacian_from(const KernelSpec& spec, const RadialTerms& t, double r2) {
    return spec.dim * t.d1 + t.d2 * r2;
}

double surface_laplacian_from(const KernelSpec& spec, const RadialTerms& t, const Point& diff,
                              const Point& normal, double mean_curvature) {
    const double n_dot = normal.dot(diff);
    const double trace = laplacian_from(spec, t, diff.squaredNorm());
    const double normal_normal = t.d1 * normal.squaredNorm() + t.d2 * n_dot * n_dot;
    return trace - normal_normal - mean_curvature * t.d1 * n_dot;
}

double entry(const KernelSpec& spec, KernelOperator op, const PointCloud& rows, std::size_t i, const Point& center) {
    const Point diff = planar(spec, rows.points[i] - center);
    const double r2 = diff.squaredNorm();
    switch (op) {
        case KernelOperator::Value:
            if (spec.family == KernelFamily::MaternSobolev) {
                return scaled_bessel_k(spec.nu(), spec.epsilon * std::sqrt(r2));
            }
            return std::exp(-spec.epsilon * spec.epsilon * r2);
        case KernelOperator::Laplacian:
            return laplacian_from(spec, radial_terms(spec, r2), r2);
        case KernelOperator::NormalDerivative:
            return radial_terms(spec, r2).d1 * rows.normals[i].dot(diff);
        case KernelOperator::SurfaceLaplacian:
            return surface_laplacian_from(spec, radial_terms(spec, r2), diff, rows.normals[i],
                                          rows.mean_curvatures[i]);
    }
    return 0.0;
}

void check_row_data(const PointCloud& rows, std::size_t i, KernelOperator op) {
    if (op == KernelOperator::NormalDerivative || op == KernelOperator::SurfaceLaplacian) {
        if (i >= rows.normals.size()) {
            throw AssemblyError("row " + std::to_string(i) + " has no normal");
        }
        check_normal(rows.normals[i], static_cast<Index>(i));
    }
    if (op == KernelOperator::SurfaceLaplacian && i >= rows.mean_curvatures.size()) {
        throw AssemblyError("row " + std::to_string(i) + " has no mean curvature");
    }
}

}  // namespace

void KernelSpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("kernel shape parameter must be positive");
    if (dim != 2 && dim != 3) throw DomainError("kernel dimension must be 2 or 3");
    if (family == KernelFamily::MaternSobolev) {
        if (!(nu() > 0.0)) throw DomainError("Matern-Sobolev kernel requires mu > dim/2");
        const double twice = 2.0 * nu();
        if (std::abs(twice - std::round(twice)) > 1e-12) {
            throw UnsupportedOrderError("Matern-Sobolev order mu - dim/2 must be a multiple of 1/2");
        }
    }
}

KernelSpec KernelSpec::matern_sobolev(double mu, double epsilon, int dim) {
    KernelSpec spec{KernelFamily::MaternSobolev, mu, epsilon, dim};
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::gaussian(double epsilon, int dim) {
    KernelSpec spec{KernelFamily::Gaussian, 0.0, epsilon, dim};
    spec.validate();
    return spec;
}

double kernel_value(const KernelSpec& spec, const Point& x, const Point& y) {
    spec.validate();
    const double r2 = planar(spec, x - y).squaredNorm();
    if (spec.family == KernelFamily::Gaussian) return std::exp(-spec.epsilon * spec.epsilon * r2);
    return scaled_bessel_k(spec.nu(), spec.epsilon * std::sqrt(r2));
}

KernelDerivativeBundle kernel_eval(const KernelSpec& spec, const Point& x, const Point& y) {
    spec.validate();
    const Point diff = planar(spec, x - y);
    const double r2 = diff.squaredNorm();
    const RadialTerms t = radial_terms(spec, r2);
    KernelDerivativeBundle out;
    out.value = t.value;
    out.gradient = t.d1 * diff;
    out.hessian = t.d1 * spatial_identity(spec.dim) + t.d2 * diff * diff.transpose();
    out.laplacian = laplacian_from(spec, t, r2);
    return out;
}

double surface_laplacian_kernel(const KernelSpec& spec, const Point& x_surface, const Point& normal,
                                double mean_curvature, const Point& y_center) {
    spec.validate();
    check_normal(normal, 0);
    const Point diff = planar(spec, x_surface - y_center);
    return surface_laplacian_from(spec, radial_terms(spec, diff.squaredNorm()), diff, planar(spec, normal),
                                  mean_curvature);
}

Matrix assemble_matrix(const KernelSpec& spec, const PointCloud& rows, const PointCloud& cols,
                       KernelOperator op) {
    return assemble_mixed(spec, rows, std::vector<KernelOperator>(rows.size(), op), cols);
}

Matrix assemble_mixed(const KernelSpec& spec, const PointCloud& rows, const std::vector<KernelOperator>& row_ops,
                      const PointCloud& cols) {
    spec.validate();
    if (row_ops.size() != rows.size()) throw ShapeError("one operator per row is required");
    for (std::size_t i = 0; i < rows.size(); ++i) check_row_data(rows, i, row_ops[i]);
    const auto m = static_cast<Index>(rows.size());
    const auto n = static_cast<Index>(cols.size());
    Matrix a(m, n);
    for (Index j = 0; j < n; ++j) {
        const Point& center = cols.points[static_cast<std::size_t>(j)];
        for (Index i = 0; i < m; ++i) {
            const auto row = static_cast<std::size_t>(i);
            a(i, j) = entry(spec, row_ops[row], rows, row, center);
        }
    }
    return a;
}

}  // namespace gcol
