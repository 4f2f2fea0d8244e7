#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/qr.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace gcol;

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Extended-precision pseudoinverse solve; independent of the Householder path.
Vector pinv_solve(const Matrix& a, const Vector& b) {
    const LongMatrix al = a.cast<long double>();
    Eigen::JacobiSVD<LongMatrix> svd(al, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const LongVector x = svd.solve(b.cast<long double>());
    return x.cast<double>();
}

double rel_err(const Vector& x, const Vector& ref) { return (x - ref).norm() / std::max(ref.norm(), 1e-300); }

double svd_condition(const Matrix& a) {
    Eigen::JacobiSVD<LongMatrix> svd(a.cast<long double>());
    const auto& s = svd.singularValues();
    return static_cast<double>(s(0) / s(s.size() - 1));
}

}  // namespace

TEST_CASE("qr_factor small cases") {
    const QrFactor id = qr_factor(Matrix::Identity(3, 3));
    CHECK((id.r() - Matrix::Identity(3, 3)).norm() < 1e-15);
    Matrix col(2, 1);
    col << 3, 4;
    const QrFactor f = qr_factor(col);
    CHECK(f.r()(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(qr_factor(Matrix::Ones(2, 3)), ShapeError);
}

TEST_CASE("qr_factor reconstructs and is orthogonal") {
    auto gen = test::rng(1);
    const Matrix a = test::random_matrix(gen, 20, 8);
    const QrFactor f = qr_factor(a);
    CHECK((a - f.q_thin() * f.r()).norm() <= 1e-12 * a.norm());
    CHECK((f.q().transpose() * f.q() - Matrix::Identity(20, 20)).norm() <= 1e-12);
    for (Index k = 0; k < 8; ++k) CHECK(f.r()(k, k) >= 0.0);
    CHECK(f.r().triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
}

TEST_CASE("incremental appends equal batch factors on 200 sequences") {
    auto gen = test::rng(2);
    std::uniform_int_distribution<int> small(1, 4);
    double worst = 0.0;
    for (int seq = 0; seq < 200; ++seq) {
        const Index cols0 = small(gen);
        Matrix a = test::random_matrix(gen, cols0 + small(gen), cols0);
        QrFactor f = qr_factor(a);
        for (int step = 0; step < 4; ++step) {
            const Matrix new_rows = test::random_matrix(gen, small(gen), a.cols());
            f = qr_append_rows(f, new_rows);
            Matrix grown(a.rows() + new_rows.rows(), a.cols());
            grown << a, new_rows;
            a = grown;
            const Index add = std::min<Index>(small(gen), a.rows() - a.cols());
            if (add > 0) {
                const Matrix new_cols = test::random_matrix(gen, a.rows(), add);
                f = qr_append_columns(f, new_cols);
                Matrix wide(a.rows(), a.cols() + add);
                wide << a, new_cols;
                a = wide;
            }
            const QrFactor batch = qr_factor(a);
            const double diff = (f.r() - batch.r()).norm() / a.norm();
            worst = std::max(worst, diff);
            CHECK((a - f.q_thin() * f.r()).norm() <= 1e-12 * a.norm());
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("append edge cases") {
    auto gen = test::rng(3);
    const Matrix block = test::random_matrix(gen, 6, 3);
    const QrFactor from_empty = qr_append_columns(QrFactor::empty(6), block);
    CHECK((from_empty.r() - qr_factor(block).r()).norm() <= 1e-12 * block.norm());

    const Matrix a = test::random_matrix(gen, 4, 2);
    Matrix extra(4, 1);
    extra << 1, 1, 1, 1;
    Matrix ext(4, 3);
    ext << a, extra;
    CHECK((qr_append_columns(qr_factor(a), extra).r() - qr_factor(ext).r()).norm() <= 1e-10 * ext.norm());

    const Matrix dependent = a.col(0) * 2.0 - a.col(1) * 0.5;
    const QrFactor deficient = qr_append_columns(qr_factor(a), dependent);
    CHECK(std::abs(deficient.r()(2, 2)) <= 1e-12 * a.norm());
    CHECK(deficient.near_singular());

    const QrFactor base = qr_factor(a);
    const QrFactor zeros = qr_append_rows(base, Matrix::Zero(2, 2));
    CHECK((zeros.r() - base.r()).norm() <= 1e-14 * base.r().norm());
    const QrFactor dup = qr_append_rows(base, a.row(1));
    CHECK(dup.r().norm() > base.r().norm());

    const Matrix eight = test::random_matrix(gen, 8, 4);
    const Matrix three = test::random_matrix(gen, 3, 4);
    Matrix tall(11, 4);
    tall << eight, three;
    CHECK((qr_append_rows(qr_factor(eight), three).r() - qr_factor(tall).r()).norm() <= 1e-10 * tall.norm());

    CHECK_THROWS_AS(qr_append_columns(base, Matrix::Ones(3, 1)), ShapeError);
    CHECK_THROWS_AS(qr_append_rows(base, Matrix::Ones(1, 3)), ShapeError);
}

TEST_CASE("least-squares solves") {
    const Vector b = (Vector(3) << 1.0, -2.0, 0.5).finished();
    CHECK((ls_solve(qr_factor(Matrix::Identity(3, 3)), b).x - b).norm() < 1e-15);
    Matrix ones(2, 1);
    ones << 1, 1;
    const SolveResult mean = ls_solve(qr_factor(ones), (Vector(2) << 0.0, 2.0).finished());
    CHECK(mean.x(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(mean.near_singular);

    auto gen = test::rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = test::random_matrix(gen, 12, 5);
        const Vector rhs = test::random_vector(gen, 12);
        const SolveResult sol = ls_solve(qr_factor(a), rhs);
        CHECK(rel_err(sol.x, pinv_solve(a, rhs)) <= 1e-8);
        const Vector r = a * sol.x - rhs;
        CHECK((a.transpose() * r).lpNorm<Eigen::Infinity>() <= 1e-10 * a.norm() * rhs.norm());
    }
}

TEST_CASE("minimum-norm solves") {
    const Vector rhs = (Vector(2) << 1.0, 2.0).finished();
    CHECK((minnorm_solve(qr_factor(Matrix::Identity(2, 2)), rhs).x - rhs).norm() < 1e-15);
    Matrix a(3, 2);
    a << 1, 0, 0, 1, 0, 0;
    const Vector z = minnorm_solve(qr_factor(a), rhs).x;
    CHECK((z - (Vector(3) << 1.0, 2.0, 0.0).finished()).norm() < 1e-15);

    auto gen = test::rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = test::random_matrix(gen, 9, 4);
        const Vector c = test::random_vector(gen, 4);
        const Vector sol = minnorm_solve(qr_factor(m), c).x;
        const Vector oracle = pinv_solve(m.transpose(), c);
        CHECK(rel_err(sol, oracle) <= 1e-8);
        CHECK((m.transpose() * sol - c).norm() <= 1e-12 * (1.0 + c.norm()));
    }
}

TEST_CASE("near-singular solves are flagged") {
    Matrix a(3, 2);
    a << 1, 1, 1, 1, 1, 1 + 1e-16;
    const SolveResult s = ls_solve(qr_factor(a), Vector::Ones(3));
    CHECK(s.near_singular);
}

TEST_CASE("condition estimates") {
    CHECK(cond_estimate(qr_factor(Matrix::Identity(4, 4))) == doctest::Approx(1.0).epsilon(1e-15));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-8;
    CHECK(cond_estimate(qr_factor(d)) == doctest::Approx(1e8).epsilon(1e-12));
    CHECK(cond_estimate(QrFactor::empty(3)) == 1.0);
    Matrix singular = Matrix::Zero(3, 2);
    singular.col(0).setOnes();
    CHECK(std::isinf(cond_estimate(qr_factor(singular))));

    auto gen = test::rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix a = test::random_matrix(gen, 30, 10);
        a.col(3) *= 1e-4;
        const double oracle = svd_condition(a);
        const QrFactor f = qr_factor(a);
        CHECK(test::rel_diff(cond_estimate(f), oracle) <= 1e-8);
        const Matrix permuted = a.colwise().reverse();
        CHECK(test::rel_diff(cond_estimate(qr_factor(permuted)), oracle) <= 1e-8);
        CHECK(test::rel_diff(cond_estimate_prefix(f, 6), svd_condition(a.leftCols(6))) <= 1e-8);
    }
}

TEST_CASE("prefix residual scans") {
    const auto scan = prefix_residual_scan(Matrix::Identity(3, 3), Vector::Ones(3), 1, 3);
    REQUIRE(scan.size() == 3);
    CHECK(scan[0].inf_norm == doctest::Approx(1.0));
    CHECK(scan[1].inf_norm == doctest::Approx(1.0));
    CHECK(scan[2].inf_norm <= 1e-15);

    auto gen = test::rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = test::random_matrix(gen, 40, 12);
        const Vector b = test::random_vector(gen, 40);
        const auto res = prefix_residual_scan(a, b, 1, 12);
        for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i].two_norm <= res[i - 1].two_norm + 1e-12);
        if (trial < 10) {
            for (const auto& p : res) {
                const Vector x = pinv_solve(a.leftCols(p.k), b);
                const Vector r = b - a.leftCols(p.k) * x;
                CHECK(std::abs(p.inf_norm - r.lpNorm<Eigen::Infinity>()) <= 1e-10);
                CHECK(std::abs(p.two_norm - r.norm()) <= 1e-10);
            }
        }
    }
}

TEST_CASE("LeastSquaresSolver matches ls_solve") {
    auto gen = test::rng(9);
    const Matrix a = test::random_matrix(gen, 15, 6);
    const Matrix rhs = test::random_matrix(gen, 15, 3);
    const LeastSquaresSolver solver(a);
    const Matrix x = solver.solve(rhs);
    for (Index j = 0; j < 3; ++j) {
        const Vector bj = rhs.col(j);
        CHECK(rel_err(solver.solve(bj), pinv_solve(a, bj)) <= 1e-10);
        CHECK(rel_err(x.col(j), pinv_solve(a, bj)) <= 1e-10);
    }
}
