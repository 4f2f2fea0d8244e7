#include "greedy_colloc/qr.hpp"

#include "greedy_colloc/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gcol {
namespace {

constexpr double kNearSingularRatio = 1e-14;

bool triangle_near_singular(const Eigen::Ref<const Matrix>& r) {
    if (r.cols() == 0) return false;
    const Vector diag = r.diagonal().cwiseAbs();
    return diag.minCoeff() < kNearSingularRatio * diag.maxCoeff();
}

double triangle_condition(const Eigen::Ref<const Matrix>& r) {
    if (r.cols() == 0) return 1.0;
    if ((r.diagonal().array() == 0.0).any()) return std::numeric_limits<double>::infinity();
    const Matrix upper = r.triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Matrix> svd(upper);
    const Vector& s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
    return s(0) / smallest;
}

}  // namespace

QrFactor QrFactor::empty(Index rows) {
    QrFactor f;
    f.q_ = Matrix::Identity(rows, rows);
    f.r_.resize(0, 0);
    return f;
}

bool QrFactor::near_singular() const { return triangle_near_singular(r_); }

void QrFactor::normalize_signs() {
    for (Index k = 0; k < r_.cols(); ++k) {
        if (r_(k, k) < 0.0) {
            r_.row(k) *= -1.0;
            q_.col(k) *= -1.0;
        }
    }
}

QrFactor qr_factor(const Matrix& a) {
    if (a.rows() < a.cols()) {
        throw ShapeError("qr_factor requires rows >= cols, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
    }
    QrFactor f;
    if (a.cols() == 0) return QrFactor::empty(a.rows());
    Eigen::HouseholderQR<Matrix> qr(a);
    f.q_ = qr.householderQ() * Matrix::Identity(a.rows(), a.rows());
    f.r_ = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    f.normalize_signs();
    return f;
}

QrFactor qr_append_columns(const QrFactor& f, const Matrix& new_cols) {
    const Index m = f.rows();
    const Index n = f.cols();
    const Index k = new_cols.cols();
    if (new_cols.rows() != m) throw ShapeError("appended columns must have as many rows as the factor");
    if (n + k > m) throw ShapeError("appending columns would leave fewer rows than columns");
    if (k == 0) return f;

    // w = Q^T a splits into the part inside span(Q1) and a trailing part that a fresh
    // Householder sequence folds into the new diagonal block.
    const Matrix w = f.q_.transpose() * new_cols;
    Eigen::HouseholderQR<Matrix> tail(w.bottomRows(m - n));

    QrFactor out;
    out.q_ = f.q_;
    out.q_.rightCols(m - n).applyOnTheRight(tail.householderQ());
    out.r_ = Matrix::Zero(n + k, n + k);
    out.r_.topLeftCorner(n, n) = f.r_;
    out.r_.topRightCorner(n, k) = w.topRows(n);
    out.r_.bottomRightCorner(k, k) = tail.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    out.normalize_signs();
    return out;
}

QrFactor qr_append_rows(const QrFactor& f, const Matrix& new_rows) {
    const Index m = f.rows();
    const Index n = f.cols();
    const Index k = new_rows.rows();
    if (new_rows.cols() != n) throw ShapeError("appended rows must have as many columns as the factor");
    if (k == 0) return f;

    QrFactor out;
    out.q_ = Matrix::Zero(m + k, m + k);
    out.q_.topLeftCorner(m, m) = f.q_;
    out.q_.bottomRightCorner(k, k).setIdentity();
    if (n == 0) {
        out.r_.resize(0, 0);
        return out;
    }

    // [A; B] = diag(Q, I) [R; 0; B]. Re-triangularize the stacked rows of R and B and fold
    // the reflectors into the matching columns (0..n-1 and m..m+k-1) of the extended Q.
    Matrix stacked(n + k, n);
    stacked.topRows(n) = f.r_;
    stacked.bottomRows(k) = new_rows;
    Eigen::HouseholderQR<Matrix> qr(stacked);

    Matrix active(m + k, n + k);
    active.leftCols(n) = out.q_.leftCols(n);
    active.rightCols(k) = out.q_.rightCols(k);
    active.applyOnTheRight(qr.householderQ());
    out.q_.leftCols(n) = active.leftCols(n);
    out.q_.rightCols(k) = active.rightCols(k);
    out.r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    out.normalize_signs();
    return out;
}

SolveResult ls_solve(const QrFactor& f, const Vector& b) {
    if (b.size() != f.rows()) throw ShapeError("ls_solve: right-hand side length does not match rows");
    SolveResult out;
    out.near_singular = f.near_singular();
    const Vector c = f.q().leftCols(f.cols()).transpose() * b;
    out.x = f.r().triangularView<Eigen::Upper>().solve(c);
    return out;
}

SolveResult minnorm_solve(const QrFactor& f, const Vector& rhs) {
    if (rhs.size() != f.cols()) throw ShapeError("minnorm_solve: right-hand side length does not match columns");
    SolveResult out;
    out.near_singular = f.near_singular();
    const Vector y = f.r().transpose().triangularView<Eigen::Lower>().solve(rhs);
    out.x = f.q().leftCols(f.cols()) * y;
    return out;
}

double cond_estimate(const QrFactor& f) { return triangle_condition(f.r()); }

double cond_estimate_prefix(const QrFactor& f, Index k) {
    if (k < 0 || k > f.cols()) throw ShapeError("prefix length out of range");
    return triangle_condition(f.r().topLeftCorner(k, k));
}

std::vector<PrefixResidual> prefix_residual_scan(const Matrix& a, const Vector& b, Index k_lo, Index k_hi) {
    if (b.size() != a.rows()) throw ShapeError("prefix_residual_scan: b length does not match rows");
    if (k_lo < 1 || k_lo > k_hi || k_hi > a.cols()) {
        throw ShapeError("prefix_residual_scan requires 1 <= k_lo <= k_hi <= cols");
    }
    if (k_hi > a.rows()) throw ShapeError("prefix_residual_scan requires k_hi <= rows");

    Eigen::HouseholderQR<Matrix> qr(a.leftCols(k_hi));
    const Vector c = qr.householderQ().transpose() * b;
    const Matrix& packed = qr.matrixQR();

    std::vector<PrefixResidual> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (Index k = k_lo; k <= k_hi; ++k) {
        PrefixResidual entry;
        entry.k = k;
        if ((packed.diagonal().head(k).array() == 0.0).any()) {
            entry.inf_norm = entry.two_norm = std::numeric_limits<double>::infinity();
        } else {
            const Vector x = packed.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(c.head(k));
            const Vector residual = b - a.leftCols(k) * x;
            entry.inf_norm = residual.lpNorm<Eigen::Infinity>();
            entry.two_norm = residual.norm();
            if (!std::isfinite(entry.inf_norm)) {
                entry.inf_norm = entry.two_norm = std::numeric_limits<double>::infinity();
            }
        }
        out.push_back(entry);
    }
    return out;
}

LeastSquaresSolver::LeastSquaresSolver(const Matrix& a) {
    if (a.rows() < a.cols() || a.cols() == 0) throw ShapeError("least-squares system needs rows >= cols >= 1");
    qr_.compute(a);
}

Vector LeastSquaresSolver::solve(const Vector& b) const {
    if (b.size() != rows()) throw ShapeError("right-hand side length does not match system rows");
    const Vector c = qr_.householderQ().transpose() * b;
    return qr_.matrixQR().topLeftCorner(cols(), cols()).triangularView<Eigen::Upper>().solve(c.head(cols()));
}

Matrix LeastSquaresSolver::solve(const Matrix& b) const {
    if (b.rows() != rows()) throw ShapeError("right-hand side rows do not match system rows");
    Matrix c = b;
    c.applyOnTheLeft(qr_.householderQ().transpose());
    return qr_.matrixQR().topLeftCorner(cols(), cols()).triangularView<Eigen::Upper>().solve(c.topRows(cols()));
}

}  // namespace gcol
