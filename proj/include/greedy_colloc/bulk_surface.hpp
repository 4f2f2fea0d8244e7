#pragma once

#include "greedy_colloc/geometry.hpp"
#include "greedy_colloc/greedy.hpp"
#include "greedy_colloc/kernels.hpp"
#include "greedy_colloc/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gcol {

/// Schnakenberg kinetics with linear bulk-surface exchange.
struct BulkSurfaceParams {
    double a = 0.1;
    double b = 0.9;
    double alpha1 = 5.0 / 12.0;
    double alpha2 = 5.0;
    double beta1 = 5.0 / 12.0;
    double beta2 = 5.0;
    double gamma = 30.0;
    double q = 1.0 / 12.0;
    double d_v = 2.0;
    double d_s = 2.0;

    double d_u() const { return q * d_v; }
    double d_w() const { return q * d_s; }

    /// Throws DomainError unless a + b > 0 and every diffusion coefficient is positive.
    void validate() const;

    static BulkSurfaceParams spots();
    /// Spots kinetics with D_v = D_s = 1.
    static BulkSurfaceParams spots_slow_diffusion();
    static BulkSurfaceParams stripes();
    static BulkSurfaceParams torus();
    static BulkSurfaceParams cyclide();
    static BulkSurfaceParams ellipsoid();
};

struct KineticsValue {
    double f1 = 0.0;
    double f2 = 0.0;
};

/// f1 = gamma (a - u + u^2 v), f2 = gamma (b - u^2 v).
KineticsValue kinetics(double u, double v, const BulkSurfaceParams& p);

/// h1(u, w) = alpha1 w - beta1 u.
double coupling_h1(double u, double w, const BulkSurfaceParams& p);
/// h2(v, s) = alpha2 s - beta2 v.
double coupling_h2(double v, double s, const BulkSurfaceParams& p);

struct FieldValues {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double s = 0.0;
};

/// Homogeneous equilibrium (a + b, b / (a + b)^2, a + b, b / (a + b)^2).
FieldValues equilibrium(const BulkSurfaceParams& p);

enum class SmoothnessCondition { None, SO1, SO2 };

std::string smoothness_condition_name(SmoothnessCondition c);

/// SO1: mu_surf >= mu_bulk + d/2 - 2 and mu_bulk >= (9 + d)/2.
/// SO2: mu_bulk >= mu_surf - d/2 and mu_surf >= 3 + d. SO1 is reported when both hold.
SmoothnessCondition validate_smoothness(double mu_bulk, double mu_surf, int dim);

/// Interior rows 3 Phi - 2 dt D lap Phi, then boundary rows D (grad Phi . n).
Matrix assemble_bulk_operator(double dt, double diffusion, const KernelSpec& kernel, const PointCloud& interior,
                              const PointCloud& boundary, const PointCloud& centers);

/// Rows 3 Phi - 2 dt D Lap_S Phi at surface points carrying normals and mean curvatures.
Matrix assemble_surface_operator(double dt, double diffusion, const KernelSpec& kernel, const PointCloud& surface,
                                 const PointCloud& centers);

/// Bulk collocation set (interior points then the surface points) and the surface set.
/// Collocation points double as trial centers.
struct BulkSurfaceGeometry {
    BulkDomain domain;
    SurfaceGeometry surface_geometry;
    PointCloud interior;
    PointCloud surface;

    /// Interior followed by surface points.
    PointCloud bulk() const;
    std::size_t bulk_size() const { return interior.size() + surface.size(); }
};

/// `n_bulk` counts every bulk center, so `n_bulk - n_surf` interior Halton points are
/// combined with `n_surf` surface points. Requires n_bulk > n_surf > 0.
BulkSurfaceGeometry make_bulk_surface_geometry(const BulkDomain& domain, const SurfaceGeometry& surface,
                                               std::size_t n_bulk, std::size_t n_surf);

/// Point values of the four fields; u, v over the bulk set and w, s over the surface set.
struct FieldState {
    Vector u;
    Vector v;
    Vector w;
    Vector s;
};

/// Two history levels, newest first.
struct FieldHistory {
    FieldState newest;
    FieldState older;
};

/// Right-hand sides of step k >= 2 for the four systems in the order u, v, w, s.
/// Bulk vectors hold interior rows then boundary rows; history values are point values at
/// the matching collocation points.
std::array<Vector, 4> step_rhs(const BulkSurfaceParams& p, const BulkSurfaceGeometry& geom,
                               const FieldHistory& history, double dt);

enum class FieldId { U = 0, V = 1, W = 2, S = 3 };

std::string field_name(FieldId id);

struct BulkSurfaceProblem {
    BulkSurfaceParams params;
    BulkSurfaceGeometry geometry;
    KernelSpec bulk_kernel;
    KernelSpec surface_kernel;
    double dt = 0.01;
    double t_final = 1.0;
    bool use_greedy = true;
    /// Surface smoothness order checked against the bulk kernel's mu.
    double mu_surface = 5.5;
    std::vector<double> snapshot_times;
    /// Any |field value| above this (or a non-finite value) counts as blow-up.
    double blowup_threshold = 1e6;

    int step_count() const;
    void validate() const;
};

struct BulkSurfaceSnapshot {
    double time = 0.0;
    FieldState fields;
};

/// Column choice for one of the four systems.
struct FieldSelection {
    IndexList cols;
    /// Present when the greedy selector ran.
    std::optional<GreedySelection> greedy;
};

/// Marches the coupled system from equilibrium with SBDF2, factoring each of the four
/// stationary systems once.
class BulkSurfaceSolver {
public:
    /// Assembles the operators, runs the greedy selector on each (all-ones right-hand side)
    /// when enabled, and factors the reduced systems. State is at step 1 (equilibrium).
    explicit BulkSurfaceSolver(BulkSurfaceProblem problem);

    const BulkSurfaceProblem& problem() const { return problem_; }
    const std::array<FieldSelection, 4>& selections() const { return selections_; }
    const Matrix& operator_matrix(FieldId id) const { return operators_[static_cast<std::size_t>(id)]; }

    int step_index() const { return step_; }
    double time() const { return step_ * problem_.dt; }
    const FieldHistory& history() const { return history_; }
    bool blown_up() const { return blowup_; }

    /// Advances one SBDF2 step; returns false (and stops advancing) on blow-up.
    bool step();

private:
    FieldState apply(const std::array<Vector, 4>& rhs) const;

    BulkSurfaceProblem problem_;
    std::array<Matrix, 4> operators_;
    std::array<FieldSelection, 4> selections_;
    // Maps a right-hand side directly to point values: E(:, cols) A(:, cols)^+.
    std::array<Matrix, 4> propagators_;
    FieldHistory history_;
    int step_ = 1;
    bool blowup_ = false;
};

struct BulkSurfaceRun {
    std::array<FieldSelection, 4> selections;
    std::vector<BulkSurfaceSnapshot> snapshots;
    FieldState final_state;
    bool blowup = false;
    int blowup_step = -1;
    int steps_taken = 0;
    double setup_seconds = 0.0;
    double march_seconds = 0.0;
};

/// Runs to t_final, recording snapshots at the requested times and always at the end.
BulkSurfaceRun simulate(const BulkSurfaceProblem& problem);

/// Largest |x - c| / |c| over the four fields, against the equilibrium constants.
double max_relative_deviation(const FieldState& state, const FieldValues& constants);

}  // namespace gcol
