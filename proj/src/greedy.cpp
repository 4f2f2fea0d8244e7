#include "greedy_colloc/greedy.hpp"

#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace gcol {
namespace {

constexpr double kMachineEpsilon = 0x1p-52;

enum class Criteria { Original, New };

// Unselected indices ordered by descending |values|, ties by index.
IndexList ranked_unselected(const Vector& values, const IndexList& selected) {
    std::vector<bool> taken(static_cast<std::size_t>(values.size()), false);
    for (Index i : selected) taken[static_cast<std::size_t>(i)] = true;
    IndexList candidates;
    for (Index i = 0; i < values.size(); ++i) {
        if (!taken[static_cast<std::size_t>(i)]) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Index lhs, Index rhs) { return std::abs(values(lhs)) > std::abs(values(rhs)); });
    return candidates;
}

Index argmax_abs(const Vector& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    }
    return best;
}

IndexList slice(const IndexList& from, std::size_t begin, std::size_t end) {
    return IndexList(from.begin() + static_cast<std::ptrdiff_t>(begin), from.begin() + static_cast<std::ptrdiff_t>(end));
}

// Residuals of the subsystem held in `factor` (rows x cols of A).
ResidualPair residuals_from_factor(const Matrix& a, const IndexList& rows, const IndexList& cols, const Vector& b,
                                   const QrFactor& factor) {
    ResidualPair out;
    const Vector b_sel = b(rows);
    const SolveResult primal = ls_solve(factor, b_sel);
    const SolveResult dual = minnorm_solve(factor, -primal.x);
    out.eta = primal.x;
    out.zeta = dual.x;
    out.near_singular = primal.near_singular || dual.near_singular;
    out.primal = a(Eigen::all, cols) * out.eta - b;
    out.dual = a(rows, Eigen::all).transpose() * out.zeta;
    out.dual(cols) += out.eta;
    return out;
}

double full_row_residual_inf(const Matrix& a, const IndexList& cols, const Vector& b) {
    if (cols.empty()) return b.lpNorm<Eigen::Infinity>();
    const Matrix sub = a(Eigen::all, cols);
    const auto k = static_cast<Index>(cols.size());
    return prefix_residual_scan(sub, b, k, k).front().inf_norm;
}

void check_inputs(const Matrix& a, const Vector& b, const Tolerances& tol) {
    tol.validate();
    if (b.size() != a.rows()) throw ShapeError("greedy: b length does not match rows of A");
    if (a.cols() < 1 || a.rows() < a.cols()) throw ShapeError("greedy: A must be non-empty with rows >= cols");
}

// Largest prefix of cols' whose condition stays under the cap. Prefix conditions of a
// triangular factor are non-decreasing in exact arithmetic; a failed check on the lower
// bracket triggers a downward linear scan.
Index backtrack_condition(const QrFactor& factor, Index lo, Index hi, double cap, bool& violated) {
    if (cond_estimate_prefix(factor, lo) > cap) {
        violated = true;
        while (lo > 1 && cond_estimate_prefix(factor, lo) > cap) --lo;
        return lo;
    }
    while (hi - lo > 1) {
        const Index mid = lo + (hi - lo) / 2;
        if (cond_estimate_prefix(factor, mid) <= cap) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

GreedySelection run_greedy(const Matrix& a, const Vector& b, const Tolerances& tol, const GreedyOptions& options,
                           Criteria criteria) {
    check_inputs(a, b, tol);
    if (!(options.row_oversampling >= 1.0)) throw DomainError("row oversampling must be at least 1");
    const Index n_total = a.cols();
    const double cap = 1.0 / tol.tau_kappa;

    GreedySelection sel;
    sel.tolerances = tol;
    auto [rows, cols] = initialize_selection(a, b);
    QrFactor factor = qr_factor(a(rows, cols));
    double kappa = cond_estimate(factor);
    bool finished = false;
    int iter = 0;

    while (static_cast<Index>(cols.size()) < n_total) {
        const ResidualPair res = residuals_from_factor(a, rows, cols, b, factor);
        sel.near_singular_solve = sel.near_singular_solve || res.near_singular;
        IterationRecord rec;
        rec.iter = iter++;
        rec.rows = static_cast<Index>(rows.size());
        rec.cols = static_cast<Index>(cols.size());
        rec.kappa = kappa;
        rec.res_inf_selected = res.primal(rows).lpNorm<Eigen::Infinity>();
        rec.res_inf_primal = res.primal.lpNorm<Eigen::Infinity>();
        rec.res_inf_fullrow = full_row_residual_inf(a, cols, b);
        sel.iteration_log.push_back(rec);

        // SC2 judges the subsystem solution on every row; SC2' judges the least-squares fit
        // over every row.
        const double trigger = criteria == Criteria::Original ? rec.res_inf_primal : rec.res_inf_fullrow;
        if (trigger < tol.tau_r) {
            if (criteria == Criteria::Original) {
                sel.termination = Termination::SC2;
            } else {
                sel.termination = Termination::SC2Prime;
                const Matrix sub = a(Eigen::all, cols);
                const auto scan = prefix_residual_scan(sub, b, 1, static_cast<Index>(cols.size()));
                const auto hit = std::find_if(scan.begin(), scan.end(),
                                              [&](const PrefixResidual& p) { return p.inf_norm <= tol.tau_r_prime; });
                if (hit != scan.end()) cols.resize(static_cast<std::size_t>(hit->k));
            }
            finished = true;
            break;
        }

        const BlockExpansion next = expand_block(a, rows, cols, res, options.row_oversampling);
        const IndexList new_rows = slice(next.rows, rows.size(), next.rows.size());
        const IndexList new_cols = slice(next.cols, cols.size(), next.cols.size());
        // Rows first so the factor stays overdetermined while columns are added.
        factor = qr_append_rows(factor, a(new_rows, cols));
        factor = qr_append_columns(factor, a(next.rows, new_cols));
        const double kappa_next = cond_estimate(factor);

        if (kappa_next > cap) {
            const auto lo = static_cast<Index>(cols.size());
            const auto hi = static_cast<Index>(next.cols.size());
            rows = next.rows;
            sel.candidate_cols = next.cols;
            if (criteria == Criteria::Original) {
                sel.termination = Termination::SC1;
                const Index k = backtrack_condition(factor, lo, hi, cap, sel.bisection_monotonicity_violated);
                cols = slice(next.cols, 0, static_cast<std::size_t>(k));
            } else {
                sel.termination = Termination::SC1Prime;
                const Matrix sub = a(Eigen::all, next.cols);
                const auto scan = prefix_residual_scan(sub, b, lo + 1, hi);
                const auto best = std::min_element(scan.begin(), scan.end(),
                                                   [](const PrefixResidual& l, const PrefixResidual& r) {
                                                       return l.inf_norm < r.inf_norm;
                                                   });
                cols = slice(next.cols, 0, static_cast<std::size_t>(best->k));
            }
            finished = true;
            break;
        }
        rows = next.rows;
        cols = next.cols;
        kappa = kappa_next;
    }
    if (!finished) sel.termination = Termination::AllColumns;

    sel.final_condition = cond_estimate_prefix(factor, static_cast<Index>(cols.size()));
    sel.final_full_row_residual_inf = full_row_residual_inf(a, cols, b);
    sel.rows = std::move(rows);
    sel.cols = std::move(cols);
    return sel;
}

}  // namespace

void Tolerances::validate() const {
    if (!(tau_kappa > 0.0 && tau_kappa <= 1.0)) throw DomainError("tau_kappa must lie in (0, 1]");
    if (!(tau_r > 0.0)) throw DomainError("tau_r must be positive");
    if (!(tau_r_prime > 0.0 && tau_r_prime <= tau_r)) throw DomainError("tau_r_prime must lie in (0, tau_r]");
}

Tolerances tolerances_from_dt(double dt) {
    if (!(dt > 0.0) || dt > 1.0) throw DomainError("time step must lie in (0, 1]");
    return {kMachineEpsilon / dt, dt, dt * dt};
}

Tolerances machine_tolerances() { return {kMachineEpsilon, kMachineEpsilon, kMachineEpsilon}; }

ResidualPair residual_pair(const Matrix& a, const IndexList& rows, const IndexList& cols, const Vector& b) {
    if (cols.empty() || rows.size() < cols.size()) {
        throw DomainError("residual_pair requires |rows| >= |cols| >= 1");
    }
    if (b.size() != a.rows()) throw ShapeError("residual_pair: b length does not match rows of A");
    return residuals_from_factor(a, rows, cols, b, qr_factor(a(rows, cols)));
}

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::AllColumns: return "AllColumns";
        case Termination::SC1: return "SC1";
        case Termination::SC2: return "SC2";
        case Termination::SC1Prime: return "SC1Prime";
        case Termination::SC2Prime: return "SC2Prime";
    }
    return "unknown";
}

std::pair<IndexList, IndexList> initialize_selection(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) throw ShapeError("initialize_selection: b length does not match rows of A");
    if (b.size() == 0 || b.lpNorm<Eigen::Infinity>() == 0.0) {
        throw DegenerateInputError("right-hand side is zero; nothing to approximate");
    }
    const Index row = argmax_abs(b);
    const Vector weights = a.row(row).transpose() * b(row);
    return {IndexList{row}, IndexList{argmax_abs(weights)}};
}

BlockExpansion expand_block(const Matrix& a, const IndexList& rows, const IndexList& cols,
                            const ResidualPair& residuals, double row_oversampling) {
    if (!(row_oversampling >= 1.0)) throw DomainError("row oversampling must be at least 1");
    const Index m = a.rows();
    BlockExpansion out{rows, cols};
    const IndexList col_rank = ranked_unselected(residuals.dual, cols);
    const std::size_t add_cols = std::min(cols.size(), col_rank.size());
    out.cols.insert(out.cols.end(), col_rank.begin(), col_rank.begin() + static_cast<std::ptrdiff_t>(add_cols));

    const auto row_floor = static_cast<Index>(std::ceil(row_oversampling * static_cast<double>(out.cols.size())));
    const auto row_target =
        static_cast<std::size_t>(std::min<Index>(std::max<Index>(2 * static_cast<Index>(rows.size()), row_floor), m));
    if (row_target > rows.size()) {
        const IndexList row_rank = ranked_unselected(residuals.primal, rows);
        const std::size_t add_rows = std::min(row_target - rows.size(), row_rank.size());
        out.rows.insert(out.rows.end(), row_rank.begin(), row_rank.begin() + static_cast<std::ptrdiff_t>(add_rows));
    }
    return out;
}

GreedySelection select_subspace_original(const Matrix& a, const Vector& b, const Tolerances& tol,
                                         const GreedyOptions& options) {
    return run_greedy(a, b, tol, options, Criteria::Original);
}

GreedySelection select_subspace_new(const Matrix& a, const Vector& b, const Tolerances& tol,
                                    const GreedyOptions& options) {
    return run_greedy(a, b, tol, options, Criteria::New);
}

void write_iteration_log_csv(std::ostream& out, const GreedySelection& selection) {
    out << "iter,rows,cols,kappa,res_inf_selected,res_inf_fullrow\n";
    const auto old_precision = out.precision(17);
    for (const auto& rec : selection.iteration_log) {
        out << rec.iter << ',' << rec.rows << ',' << rec.cols << ',' << rec.kappa << ',' << rec.res_inf_selected
            << ',' << rec.res_inf_fullrow << '\n';
    }
    out.precision(old_precision);
}

}  // namespace gcol
