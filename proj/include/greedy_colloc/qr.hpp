#pragma once

#include "greedy_colloc/types.hpp"

#include <Eigen/QR>

#include <vector>

namespace gcol {

/// A = Q(:, 0:n) * R with Q an explicit m x m orthogonal matrix and R an n x n upper
/// triangle whose diagonal is non-negative. Immutable; appends return new factors.
class QrFactor {
public:
    QrFactor() = default;

    /// Factor with `rows` rows and no columns (Q = I).
    static QrFactor empty(Index rows);

    Index rows() const { return q_.rows(); }
    Index cols() const { return r_.cols(); }
    const Matrix& q() const { return q_; }
    const Matrix& r() const { return r_; }
    /// Leading n columns of Q.
    Matrix q_thin() const { return q_.leftCols(cols()); }

    /// Smallest |R(k,k)| is below 1e-14 of the largest.
    bool near_singular() const;

private:
    friend QrFactor qr_factor(const Matrix& a);
    friend QrFactor qr_append_columns(const QrFactor& f, const Matrix& new_cols);
    friend QrFactor qr_append_rows(const QrFactor& f, const Matrix& new_rows);

    void normalize_signs();

    Matrix q_;
    Matrix r_;
};

/// Batch Householder factorization; requires rows >= cols.
QrFactor qr_factor(const Matrix& a);

/// Factor of [A | new_cols]; requires matching row count and rows >= total columns.
QrFactor qr_append_columns(const QrFactor& f, const Matrix& new_cols);

/// Factor of [A; new_rows]; requires matching column count.
QrFactor qr_append_rows(const QrFactor& f, const Matrix& new_rows);

struct SolveResult {
    Vector x;
    bool near_singular = false;
};

/// Least-squares minimizer of |A x - b|_2.
SolveResult ls_solve(const QrFactor& f, const Vector& b);

/// Minimum-norm z with A^T z = rhs.
SolveResult minnorm_solve(const QrFactor& f, const Vector& rhs);

/// 2-norm condition number of A from the singular values of R; +inf if singular, 1 for
/// an empty factor.
double cond_estimate(const QrFactor& f);

/// Condition number of the first `k` columns of A (leading k x k block of R).
double cond_estimate_prefix(const QrFactor& f, Index k);

struct PrefixResidual {
    Index k = 0;
    double inf_norm = 0.0;
    double two_norm = 0.0;
};

/// For k = k_lo..k_hi, residual norms of b - A(:, 0:k) x_k with x_k the least-squares
/// solution over the first k columns. One factorization of A(:, 0:k_hi) is shared.
/// A prefix with an exactly singular triangle reports +inf.
std::vector<PrefixResidual> prefix_residual_scan(const Matrix& a, const Vector& b, Index k_lo, Index k_hi);

/// Householder factorization of a fixed m x k system (m >= k), computed once and reused
/// for every right-hand side of a time loop.
class LeastSquaresSolver {
public:
    explicit LeastSquaresSolver(const Matrix& a);

    Index rows() const { return qr_.rows(); }
    Index cols() const { return qr_.cols(); }

    /// Least-squares coefficients for `b`.
    Vector solve(const Vector& b) const;
    /// Column-wise least-squares coefficients for every column of `b`.
    Matrix solve(const Matrix& b) const;

private:
    Eigen::HouseholderQR<Matrix> qr_;
};

}  // namespace gcol
