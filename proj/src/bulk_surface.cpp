#include "greedy_colloc/bulk_surface.hpp"

#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/qr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

namespace gcol {
namespace {

IndexList all_indices(std::size_t n) {
    IndexList out(n);
    std::iota(out.begin(), out.end(), Index{0});
    return out;
}

bool finite_and_bounded(const Vector& v, double threshold) {
    for (Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i)) || std::abs(v(i)) > threshold) return false;
    }
    return true;
}

FieldState constant_state(const FieldValues& c, std::size_t n_bulk, std::size_t n_surf) {
    const auto nb = static_cast<Index>(n_bulk);
    const auto ns = static_cast<Index>(n_surf);
    return {Vector::Constant(nb, c.u), Vector::Constant(nb, c.v), Vector::Constant(ns, c.w),
            Vector::Constant(ns, c.s)};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void BulkSurfaceParams::validate() const {
    if (!(a + b > 0.0)) throw DomainError("a + b must be positive for the equilibrium to exist");
    if (!(d_v > 0.0 && d_s > 0.0 && q > 0.0)) throw DomainError("diffusion coefficients must be positive");
}

BulkSurfaceParams BulkSurfaceParams::spots() { return {}; }

BulkSurfaceParams BulkSurfaceParams::spots_slow_diffusion() {
    BulkSurfaceParams p;
    p.d_v = 1.0;
    p.d_s = 1.0;
    return p;
}

BulkSurfaceParams BulkSurfaceParams::stripes() {
    BulkSurfaceParams p;
    p.d_v = 5.0;
    p.d_s = 5.0;
    p.q = 0.1;
    p.gamma = 500.0;
    return p;
}

BulkSurfaceParams BulkSurfaceParams::torus() {
    BulkSurfaceParams p;
    p.d_v = 3.0;
    p.d_s = 3.0;
    p.gamma = 40.0;
    return p;
}

BulkSurfaceParams BulkSurfaceParams::cyclide() {
    BulkSurfaceParams p;
    p.d_v = 6.0;
    p.d_s = 6.0;
    return p;
}

BulkSurfaceParams BulkSurfaceParams::ellipsoid() {
    BulkSurfaceParams p;
    p.d_v = 3.0;
    p.d_s = 3.0;
    return p;
}

KineticsValue kinetics(double u, double v, const BulkSurfaceParams& p) {
    const double u2v = u * u * v;
    return {p.gamma * (p.a - u + u2v), p.gamma * (p.b - u2v)};
}

double coupling_h1(double u, double w, const BulkSurfaceParams& p) { return p.alpha1 * w - p.beta1 * u; }

double coupling_h2(double v, double s, const BulkSurfaceParams& p) { return p.alpha2 * s - p.beta2 * v; }

FieldValues equilibrium(const BulkSurfaceParams& p) {
    p.validate();
    const double u = p.a + p.b;
    const double v = p.b / (u * u);
    return {u, v, u, v};
}

std::string smoothness_condition_name(SmoothnessCondition c) {
    switch (c) {
        case SmoothnessCondition::None: return "none";
        case SmoothnessCondition::SO1: return "SO1";
        case SmoothnessCondition::SO2: return "SO2";
    }
    return "unknown";
}

SmoothnessCondition validate_smoothness(double mu_bulk, double mu_surf, int dim) {
    if (dim != 2 && dim != 3) throw DomainError("smoothness check needs dimension 2 or 3");
    const double d = dim;
    if (mu_surf >= mu_bulk + d / 2.0 - 2.0 && mu_bulk >= (9.0 + d) / 2.0) return SmoothnessCondition::SO1;
    if (mu_bulk >= mu_surf - d / 2.0 && mu_surf >= 3.0 + d) return SmoothnessCondition::SO2;
    return SmoothnessCondition::None;
}

Matrix assemble_bulk_operator(double dt, double diffusion, const KernelSpec& kernel, const PointCloud& interior,
                              const PointCloud& boundary, const PointCloud& centers) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (diffusion < 0.0) throw DomainError("diffusion must be non-negative");
    const auto ni = static_cast<Index>(interior.size());
    const auto nb = static_cast<Index>(boundary.size());
    Matrix a(ni + nb, static_cast<Index>(centers.size()));
    if (ni > 0) {
        a.topRows(ni) = 3.0 * assemble_matrix(kernel, interior, centers, KernelOperator::Value);
        if (diffusion != 0.0) {
            a.topRows(ni) -= 2.0 * dt * diffusion * assemble_matrix(kernel, interior, centers, KernelOperator::Laplacian);
        }
    }
    if (nb > 0) {
        a.bottomRows(nb) = diffusion * assemble_matrix(kernel, boundary, centers, KernelOperator::NormalDerivative);
    }
    return a;
}

Matrix assemble_surface_operator(double dt, double diffusion, const KernelSpec& kernel, const PointCloud& surface,
                                 const PointCloud& centers) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (diffusion < 0.0) throw DomainError("diffusion must be non-negative");
    Matrix a = 3.0 * assemble_matrix(kernel, surface, centers, KernelOperator::Value);
    if (diffusion != 0.0) {
        a -= 2.0 * dt * diffusion * assemble_matrix(kernel, surface, centers, KernelOperator::SurfaceLaplacian);
    }
    return a;
}

PointCloud BulkSurfaceGeometry::bulk() const { return PointCloud::concat(interior, surface); }

BulkSurfaceGeometry make_bulk_surface_geometry(const BulkDomain& domain, const SurfaceGeometry& surface,
                                               std::size_t n_bulk, std::size_t n_surf) {
    if (n_surf == 0 || n_bulk <= n_surf) throw DomainError("need n_bulk > n_surf > 0");
    if (domain_dimension(domain) != surface_dimension(surface)) {
        throw GeometryError("bulk domain and surface dimensions differ");
    }
    BulkSurfaceGeometry g{domain, surface, fill_bulk(domain, n_bulk - n_surf), fill_surface(surface, n_surf)};
    for (const Point& p : g.surface.points) {
        if (std::abs(implicit_value(surface, p)) > 1e-8) throw GeometryError("surface point is off the surface");
    }
    return g;
}

std::array<Vector, 4> step_rhs(const BulkSurfaceParams& p, const BulkSurfaceGeometry& geom,
                               const FieldHistory& history, double dt) {
    const auto ni = static_cast<Index>(geom.interior.size());
    const auto ns = static_cast<Index>(geom.surface.size());
    const auto nb = ni + ns;
    for (const FieldState* level : {&history.newest, &history.older}) {
        if (level->u.size() != nb || level->v.size() != nb || level->w.size() != ns || level->s.size() != ns) {
            throw DomainError("step_rhs needs two complete history levels");
        }
    }
    const FieldState& h1 = history.newest;
    const FieldState& h2 = history.older;

    std::array<Vector, 4> out{Vector(nb), Vector(nb), Vector(ns), Vector(ns)};
    for (Index i = 0; i < ni; ++i) {
        const KineticsValue k1 = kinetics(h1.u(i), h1.v(i), p);
        const KineticsValue k2 = kinetics(h2.u(i), h2.v(i), p);
        out[0](i) = 4.0 * h1.u(i) - h2.u(i) + 2.0 * dt * (2.0 * k1.f1 - k2.f1);
        out[1](i) = 4.0 * h1.v(i) - h2.v(i) + 2.0 * dt * (2.0 * k1.f2 - k2.f2);
    }
    for (Index j = 0; j < ns; ++j) {
        const Index b = ni + j;
        out[0](b) = coupling_h1(h1.u(b), h1.w(j), p);
        out[1](b) = coupling_h2(h1.v(b), h1.s(j), p);

        const KineticsValue k1 = kinetics(h1.w(j), h1.s(j), p);
        const KineticsValue k2 = kinetics(h2.w(j), h2.s(j), p);
        const double g1_new = k1.f1 - coupling_h1(h1.u(b), h1.w(j), p);
        const double g1_old = k2.f1 - coupling_h1(h2.u(b), h2.w(j), p);
        const double g2_new = k1.f2 - coupling_h2(h1.v(b), h1.s(j), p);
        const double g2_old = k2.f2 - coupling_h2(h2.v(b), h2.s(j), p);
        out[2](j) = 4.0 * h1.w(j) - h2.w(j) + 2.0 * dt * (2.0 * g1_new - g1_old);
        out[3](j) = 4.0 * h1.s(j) - h2.s(j) + 2.0 * dt * (2.0 * g2_new - g2_old);
    }
    return out;
}

std::string field_name(FieldId id) {
    switch (id) {
        case FieldId::U: return "u";
        case FieldId::V: return "v";
        case FieldId::W: return "w";
        case FieldId::S: return "s";
    }
    return "unknown";
}

int BulkSurfaceProblem::step_count() const {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!(t_final > 0.0)) throw DomainError("final time must be positive");
    const double steps = std::round(t_final / dt);
    if (steps < 2.0 || std::abs(steps * dt - t_final) > 1e-12 * std::max(1.0, t_final)) {
        throw DomainError("time step must divide the final time into at least two steps");
    }
    return static_cast<int>(steps);
}

void BulkSurfaceProblem::validate() const {
    params.validate();
    bulk_kernel.validate();
    surface_kernel.validate();
    const int dim = domain_dimension(geometry.domain);
    if (bulk_kernel.dim != dim || surface_kernel.dim != dim) {
        throw DomainError("kernel dimensions must match the domain");
    }
    if (bulk_kernel.family == KernelFamily::MaternSobolev &&
        validate_smoothness(bulk_kernel.mu, mu_surface, dim) == SmoothnessCondition::None) {
        throw DomainError("kernel smoothness orders satisfy neither SO1 nor SO2");
    }
    if (geometry.interior.empty() || geometry.surface.empty()) throw DomainError("empty bulk or surface point set");
    if (!geometry.surface.has_normals() || !geometry.surface.has_curvatures()) {
        throw GeometryError("surface points need normals and mean curvatures");
    }
    if (!(blowup_threshold > 0.0)) throw DomainError("blow-up threshold must be positive");
    step_count();
}

BulkSurfaceSolver::BulkSurfaceSolver(BulkSurfaceProblem problem) : problem_(std::move(problem)) {
    problem_.validate();
    const BulkSurfaceParams& p = problem_.params;
    const BulkSurfaceGeometry& g = problem_.geometry;
    const PointCloud bulk = g.bulk();
    const double dt = problem_.dt;

    operators_[0] = assemble_bulk_operator(dt, p.d_u(), problem_.bulk_kernel, g.interior, g.surface, bulk);
    operators_[1] = assemble_bulk_operator(dt, p.d_v, problem_.bulk_kernel, g.interior, g.surface, bulk);
    operators_[2] = assemble_surface_operator(dt, p.d_w(), problem_.surface_kernel, g.surface, g.surface);
    operators_[3] = assemble_surface_operator(dt, p.d_s, problem_.surface_kernel, g.surface, g.surface);
    const Matrix bulk_values = assemble_matrix(problem_.bulk_kernel, bulk, bulk, KernelOperator::Value);
    const Matrix surface_values = assemble_matrix(problem_.surface_kernel, g.surface, g.surface, KernelOperator::Value);

    const Tolerances tol = tolerances_from_dt(dt);
    for (std::size_t f = 0; f < 4; ++f) {
        const Matrix& a = operators_[f];
        FieldSelection& sel = selections_[f];
        if (problem_.use_greedy) {
            sel.greedy = select_subspace_new(a, Vector::Ones(a.rows()), tol);
            sel.cols = sel.greedy->cols;
        } else {
            sel.cols = all_indices(static_cast<std::size_t>(a.cols()));
        }
        const Matrix& values = f < 2 ? bulk_values : surface_values;
        const LeastSquaresSolver solver(a(Eigen::all, sel.cols));
        propagators_[f] = values(Eigen::all, sel.cols) * solver.solve(Matrix(Matrix::Identity(a.rows(), a.rows())));
    }

    // SBDF1 from the equilibrium reproduces it exactly, so both history levels start there.
    const FieldState eq = constant_state(equilibrium(p), g.bulk_size(), g.surface.size());
    history_ = {eq, eq};
}

FieldState BulkSurfaceSolver::apply(const std::array<Vector, 4>& rhs) const {
    return {propagators_[0] * rhs[0], propagators_[1] * rhs[1], propagators_[2] * rhs[2], propagators_[3] * rhs[3]};
}

bool BulkSurfaceSolver::step() {
    if (blowup_) return false;
    FieldState next = apply(step_rhs(problem_.params, problem_.geometry, history_, problem_.dt));
    ++step_;
    const double cap = problem_.blowup_threshold;
    if (!finite_and_bounded(next.u, cap) || !finite_and_bounded(next.v, cap) || !finite_and_bounded(next.w, cap) ||
        !finite_and_bounded(next.s, cap)) {
        blowup_ = true;
    }
    history_.older = std::move(history_.newest);
    history_.newest = std::move(next);
    return !blowup_;
}

BulkSurfaceRun simulate(const BulkSurfaceProblem& problem) {
    const auto setup_start = std::chrono::steady_clock::now();
    BulkSurfaceSolver solver(problem);
    BulkSurfaceRun run;
    run.selections = solver.selections();
    run.setup_seconds = seconds_since(setup_start);

    const auto march_start = std::chrono::steady_clock::now();
    const int steps = problem.step_count();
    std::vector<double> pending = problem.snapshot_times;
    std::sort(pending.begin(), pending.end());
    auto record_due = [&](int k) {
        const double t = k * problem.dt;
        while (!pending.empty() && pending.front() <= t + 0.5 * problem.dt) {
            if (pending.front() >= t - 0.5 * problem.dt) run.snapshots.push_back({t, solver.history().newest});
            pending.erase(pending.begin());
        }
    };
    record_due(1);
    while (solver.step_index() < steps) {
        if (!solver.step()) {
            run.blowup = true;
            run.blowup_step = solver.step_index();
            break;
        }
        record_due(solver.step_index());
    }
    run.steps_taken = solver.step_index();
    run.final_state = solver.history().newest;
    if (!run.blowup && (run.snapshots.empty() || run.snapshots.back().time < solver.time() - 0.5 * problem.dt)) {
        run.snapshots.push_back({solver.time(), run.final_state});
    }
    run.march_seconds = seconds_since(march_start);
    return run;
}

double max_relative_deviation(const FieldState& state, const FieldValues& c) {
    auto dev = [](const Vector& x, double ref) {
        return x.size() == 0 ? 0.0 : (x.array() - ref).abs().maxCoeff() / std::abs(ref);
    };
    return std::max({dev(state.u, c.u), dev(state.v, c.v), dev(state.w, c.w), dev(state.s, c.s)});
}

}  // namespace gcol
