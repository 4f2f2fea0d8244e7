#pragma once

#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/types.hpp"

namespace gcol {

enum class KernelFamily { MaternSobolev, Gaussian };

/// Radial kernel Phi(eps * |x - y|).
///
/// MaternSobolev: phi(s) = s^nu K_nu(s) with nu = mu - dim/2.
/// Gaussian:      phi(s) = exp(-s^2); `mu` is ignored.
struct KernelSpec {
    KernelFamily family = KernelFamily::MaternSobolev;
    double mu = 6.0;
    double epsilon = 1.0;
    int dim = 2;

    double nu() const { return mu - 0.5 * dim; }

    /// Throws DomainError unless epsilon > 0, dim is 2 or 3 and (for MS) nu > 0 is a
    /// multiple of 1/2.
    void validate() const;

    static KernelSpec matern_sobolev(double mu, double epsilon, int dim);
    static KernelSpec gaussian(double epsilon, int dim);
};

/// Kernel value and derivatives with respect to the first argument. In 2D the z row and
/// column of `hessian` and the z entry of `gradient` are zero.
struct KernelDerivativeBundle {
    double value = 0.0;
    Point gradient = Point::Zero();
    double laplacian = 0.0;
    Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
};

/// Kernel value only; defined for every finite pair, including x == y.
double kernel_value(const KernelSpec& spec, const Point& x, const Point& y);

/// Value, gradient, Laplacian and Hessian of x -> Phi(x - y).
///
/// At x == y the derivatives use their analytic limits, which exist for MS kernels only
/// when nu > 1; otherwise DomainError is thrown.
KernelDerivativeBundle kernel_eval(const KernelSpec& spec, const Point& x, const Point& y);

/// Laplace-Beltrami operator of x -> Phi(x - y) at a surface point:
/// tr(Hess) - n^T Hess n - H (n . grad), where H is the sum of principal curvatures.
double surface_laplacian_kernel(const KernelSpec& spec, const Point& x_surface, const Point& normal,
                                double mean_curvature, const Point& y_center);

enum class KernelOperator { Value, Laplacian, NormalDerivative, SurfaceLaplacian };

/// Dense matrix with entry (i, j) = (op Phi)(rows_i - cols_j).
///
/// NormalDerivative and SurfaceLaplacian read normals (and curvatures) from `rows`;
/// a missing entry raises AssemblyError naming the first offending row.
Matrix assemble_matrix(const KernelSpec& spec, const PointCloud& rows, const PointCloud& cols,
                       KernelOperator op);

/// Row-wise assembly with a per-row operator choice; used for mixed interior/boundary systems.
Matrix assemble_mixed(const KernelSpec& spec, const PointCloud& rows, const std::vector<KernelOperator>& row_ops,
                      const PointCloud& cols);

}  // namespace gcol
