#pragma once

#include "greedy_colloc/types.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gcol {

/// Stopping tolerances: condition cap 1/tau_kappa, residual trigger tau_r and the
/// backtracking target tau_r_prime <= tau_r.
struct Tolerances {
    double tau_kappa = 0.0;
    double tau_r = 0.0;
    double tau_r_prime = 0.0;

    void validate() const;
};

/// (eps_mach / dt, dt, dt^2) with eps_mach = 2^-52. Requires 0 < dt <= 1.
Tolerances tolerances_from_dt(double dt);

/// All three tolerances at eps_mach.
Tolerances machine_tolerances();

struct ResidualPair {
    Vector eta;
    Vector zeta;
    /// A(:, cols) eta - b over all rows.
    Vector primal;
    /// Zero-extended eta plus A(rows, :)^T zeta over all columns.
    Vector dual;
    bool near_singular = false;
};

ResidualPair residual_pair(const Matrix& a, const IndexList& rows, const IndexList& cols, const Vector& b);

enum class Termination { AllColumns, SC1, SC2, SC1Prime, SC2Prime };

std::string termination_name(Termination t);

struct IterationRecord {
    int iter = 0;
    Index rows = 0;
    Index cols = 0;
    double kappa = 0.0;
    /// |A(rows, cols) eta - b(rows)|_inf for the subsystem solution eta.
    double res_inf_selected = 0.0;
    /// |A(:, cols) eta - b|_inf for the same eta.
    double res_inf_primal = 0.0;
    /// Residual of the least-squares fit of b over all rows with the selected columns.
    double res_inf_fullrow = 0.0;
};

struct GreedySelection {
    IndexList rows;
    IndexList cols;
    /// Expanded column list whose prefixes SC1/SC1' searched; empty for other terminations.
    IndexList candidate_cols;
    Termination termination = Termination::AllColumns;
    Tolerances tolerances;
    double final_condition = 0.0;
    double final_full_row_residual_inf = 0.0;
    std::vector<IterationRecord> iteration_log;
    /// Set when the SC1 backtracking had to fall back to a linear scan.
    bool bisection_monotonicity_violated = false;
    /// Some subsystem solve saw a near-singular triangle.
    bool near_singular_solve = false;
};

/// Row with the largest |b_i| and the column maximizing |A(row, j) b(row)|; ties go to
/// the smallest index. Throws DegenerateInputError for b == 0.
std::pair<IndexList, IndexList> initialize_selection(const Matrix& a, const Vector& b);

struct BlockExpansion {
    IndexList rows;
    IndexList cols;
};

/// Appends the |cols| unselected columns with largest |dual| and then the unselected rows
/// with largest |primal| until |rows'| = min(max(2|rows|, ceil(row_oversampling |cols'|)), m).
/// Requires row_oversampling >= 1.
BlockExpansion expand_block(const Matrix& a, const IndexList& rows, const IndexList& cols,
                            const ResidualPair& residuals, double row_oversampling = 2.0);

struct GreedyOptions {
    /// Lower bound on |rows| / |cols| after each expansion. 1 permits square subsystems.
    double row_oversampling = 2.0;
};

/// Block greedy with SC1 (condition cap, bisection backtracking) and SC2 (primal residual
/// of the subsystem solution over all rows).
GreedySelection select_subspace_original(const Matrix& a, const Vector& b, const Tolerances& tol,
                                         const GreedyOptions& options = {});

/// Block greedy with SC1' (residual-minimizing prefix among new columns) and SC2'
/// (shortest prefix reaching tau_r_prime), both judged on least-squares fits over all rows.
GreedySelection select_subspace_new(const Matrix& a, const Vector& b, const Tolerances& tol,
                                    const GreedyOptions& options = {});

/// CSV `iter,rows,cols,kappa,res_inf_selected,res_inf_fullrow`.
void write_iteration_log_csv(std::ostream& out, const GreedySelection& selection);

}  // namespace gcol
