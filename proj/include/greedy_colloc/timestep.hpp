#pragma once

#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/greedy.hpp"
#include "greedy_colloc/kernels.hpp"
#include "greedy_colloc/types.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace gcol {

enum class Scheme { CN, SBDF1, SBDF2 };

std::string scheme_name(Scheme scheme);
/// Accepts cn, sbdf1, sbdf2 (case-insensitive); throws ConfigError otherwise.
Scheme parse_scheme(const std::string& name);

using SpaceField = std::function<double(const Point&)>;
using SpaceTimeField = std::function<double(const Point&, double)>;

/// u_t = D lap u + f in the domain, u = g on the boundary, u = u0 at t = 0.
struct HeatProblem {
    double diffusion = 1.0;
    SpaceTimeField source;
    SpaceTimeField dirichlet;
    SpaceField initial;
    /// Laplacian of the initial data; only used to build the greedy right-hand side.
    SpaceField initial_laplacian;
    /// Optional; enables error reporting.
    SpaceTimeField exact;

    PointCloud interior;
    PointCloud boundary;
    PointCloud centers;
    KernelSpec kernel;
    double dt = 0.01;
    double t_final = 0.1;

    /// Interior rows followed by boundary rows.
    PointCloud collocation() const;
    /// Number of steps K with K * dt == t_final (within 1e-12 relative); throws otherwise.
    int step_count() const;
    void validate() const;
};

/// Heat problem on the unit square (dim 2) or cube (dim 3) with exact solution
/// sin(2 pi x) sin(pi y) [sin(pi z)] e^{-2 pi^2 t} + (1 - e^{-2 pi^2 t}) / 2 and D = 1.
/// `n_interior` Halton points plus a boundary set with `boundary_per_side` points per side
/// serve as both collocation points and trial centers.
HeatProblem make_sine_heat_problem(int dim, std::size_t n_interior, std::size_t boundary_per_side,
                                   const KernelSpec& kernel, double dt, double t_final);

/// Interior weights (mass, diffusion) so that rows read mass * Phi - diffusion * dt * D * lap Phi.
struct SchemeWeights {
    double mass;
    double diffusion;
};
SchemeWeights scheme_weights(Scheme scheme);

/// Stationary collocation matrix over all collocation rows and the given trial centers
/// (all centers when `cols` is empty).
Matrix assemble_stationary_matrix(const HeatProblem& problem, Scheme scheme, const IndexList& cols = {});

/// Point values of past solutions at the interior collocation points, newest first.
struct SchemeHistory {
    std::vector<Vector> values;
    /// Laplacian of the newest level (needed by CN).
    Vector laplacian;
};

/// Right-hand side of step k (time t_k = k dt). SBDF2 needs two history levels and k >= 2;
/// missing history raises DomainError.
Vector rhs(const HeatProblem& problem, Scheme scheme, const SchemeHistory& history, int k);

/// Step-one right-hand side built from the exact initial data; independent of any
/// column selection, so the greedy selector can run on it. SBDF2 freezes the older level
/// at u0.
Vector greedy_rhs(const HeatProblem& problem, Scheme scheme);

struct RunOptions {
    /// Selected trial centers; empty means all.
    IndexList cols;
    /// Store every coefficient vector.
    bool keep_coefficients = false;
    /// Times at which point values over the collocation set are recorded.
    std::vector<double> snapshot_times;
    double blowup_threshold = 1e10;
};

struct Snapshot {
    double time = 0.0;
    Vector values;
};

struct HeatRun {
    std::vector<double> times;
    /// Relative RMS error at the collocation points per step (empty without an exact field).
    std::vector<double> errors;
    std::vector<Vector> coefficients;
    std::vector<Snapshot> snapshots;
    Vector final_values;
    bool blowup = false;
    int blowup_step = -1;
    int steps_taken = 0;
    /// Distinct stationary systems that were factored.
    int factorizations = 0;
    Index selected_cols = 0;
    double final_rel_rms = std::numeric_limits<double>::quiet_NaN();
};

/// Marches from the least-squares fit of u0 to t_final, factoring each stationary system
/// once. SBDF2 takes its first step with SBDF1.
HeatRun run(const HeatProblem& problem, Scheme scheme, const RunOptions& options = {});

/// |pred - exact|_2 / |exact|_2; throws DomainError when exact is zero.
double relative_rms_error(const Vector& pred, const Vector& exact);

/// `x,y[,z],value`.
void write_snapshot_csv(std::ostream& out, const PointCloud& cloud, const Vector& values);

}  // namespace gcol
