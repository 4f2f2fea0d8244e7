#include "greedy_colloc/timestep.hpp"

#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/qr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>

namespace gcol {
namespace {

constexpr double kPi = std::numbers::pi;

Vector sample(const PointCloud& cloud, const SpaceField& field) {
    Vector out(static_cast<Index>(cloud.size()));
    for (std::size_t i = 0; i < cloud.size(); ++i) out(static_cast<Index>(i)) = field(cloud.points[i]);
    return out;
}

Vector sample(const PointCloud& cloud, const SpaceTimeField& field, double t) {
    Vector out(static_cast<Index>(cloud.size()));
    for (std::size_t i = 0; i < cloud.size(); ++i) out(static_cast<Index>(i)) = field(cloud.points[i], t);
    return out;
}

IndexList all_indices(std::size_t n) {
    IndexList out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Index>(i);
    return out;
}

Vector interior_rhs(const HeatProblem& p, Scheme scheme, const SchemeHistory& h, int k) {
    const double dt = p.dt;
    const double t_now = k * dt;
    const double t_prev = (k - 1) * dt;
    if (h.values.empty()) throw DomainError("time step needs at least one history level");
    const Vector& u1 = h.values.front();
    switch (scheme) {
        case Scheme::CN: {
            if (h.laplacian.size() != u1.size()) throw DomainError("Crank-Nicolson step needs the history Laplacian");
            return 2.0 * u1 + dt * (sample(p.interior, p.source, t_now) + p.diffusion * h.laplacian +
                                    sample(p.interior, p.source, t_prev));
        }
        case Scheme::SBDF1:
            return u1 + dt * sample(p.interior, p.source, t_prev);
        case Scheme::SBDF2: {
            if (k < 2 || h.values.size() < 2) {
                throw DomainError("SBDF2 needs two history levels; take the first step with SBDF1");
            }
            const Vector& u2 = h.values[1];
            return 4.0 * u1 - u2 +
                   2.0 * dt * (2.0 * sample(p.interior, p.source, t_prev) - sample(p.interior, p.source, (k - 2) * dt));
        }
    }
    return {};
}

Vector stack(const Vector& top, const Vector& bottom) {
    Vector out(top.size() + bottom.size());
    out << top, bottom;
    return out;
}

bool exceeds(const Vector& coefficients, double threshold) {
    return !coefficients.allFinite() || coefficients.lpNorm<Eigen::Infinity>() > threshold;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::CN: return "cn";
        case Scheme::SBDF1: return "sbdf1";
        case Scheme::SBDF2: return "sbdf2";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "cn") return Scheme::CN;
    if (lower == "sbdf1") return Scheme::SBDF1;
    if (lower == "sbdf2") return Scheme::SBDF2;
    throw ConfigError("unknown scheme '" + name + "' (expected cn, sbdf1 or sbdf2)");
}

PointCloud HeatProblem::collocation() const { return PointCloud::concat(interior, boundary); }

int HeatProblem::step_count() const {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!(t_final > 0.0)) throw DomainError("final time must be positive");
    const double ratio = t_final / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * dt - t_final) > 1e-12 * std::max(1.0, t_final)) {
        throw DomainError("time step must divide the final time");
    }
    return static_cast<int>(steps);
}

void HeatProblem::validate() const {
    kernel.validate();
    if (!(diffusion >= 0.0)) throw DomainError("diffusion must be non-negative");
    if (interior.empty() || centers.empty()) throw ShapeError("heat problem needs interior points and centers");
    if (!source || !dirichlet || !initial) throw DomainError("heat problem needs source, boundary and initial data");
    step_count();
}

HeatProblem make_sine_heat_problem(int dim, std::size_t n_interior, std::size_t boundary_per_side,
                                   const KernelSpec& kernel, double dt, double t_final) {
    if (dim != 2 && dim != 3) throw DomainError("heat problem dimension must be 2 or 3");
    HeatProblem p;
    p.kernel = kernel;
    p.kernel.dim = dim;
    p.dt = dt;
    p.t_final = t_final;
    p.diffusion = 1.0;
    if (dim == 2) {
        p.interior = fill_bulk(UnitSquare{}, n_interior);
        p.boundary = square_boundary_ring(boundary_per_side);
    } else {
        p.interior = fill_bulk(UnitCube{}, n_interior);
        p.boundary = cube_boundary_grid(boundary_per_side);
    }
    p.centers = p.collocation();

    // Spatial mode S with lap S = -lambda S, decaying at rate 2 pi^2.
    const double lambda = dim == 2 ? 5.0 * kPi * kPi : 6.0 * kPi * kPi;
    const double rate = 2.0 * kPi * kPi;
    auto mode = [dim](const Point& x) {
        double s = std::sin(2.0 * kPi * x.x()) * std::sin(kPi * x.y());
        if (dim == 3) s *= std::sin(kPi * x.z());
        return s;
    };
    p.exact = [mode, rate](const Point& x, double t) {
        const double e = std::exp(-rate * t);
        return mode(x) * e + 0.5 * (1.0 - e);
    };
    p.dirichlet = p.exact;
    p.source = [mode, rate, lambda](const Point& x, double t) {
        // u_t - lap u for the exact solution above.
        const double e = std::exp(-rate * t);
        return (lambda - rate) * mode(x) * e + 0.5 * rate * e;
    };
    p.initial = [mode](const Point& x) { return mode(x); };
    p.initial_laplacian = [mode, lambda](const Point& x) { return -lambda * mode(x); };
    return p;
}

SchemeWeights scheme_weights(Scheme scheme) {
    switch (scheme) {
        case Scheme::CN: return {2.0, 1.0};
        case Scheme::SBDF1: return {1.0, 1.0};
        case Scheme::SBDF2: return {3.0, 2.0};
    }
    return {1.0, 1.0};
}

Matrix assemble_stationary_matrix(const HeatProblem& problem, Scheme scheme, const IndexList& cols) {
    problem.kernel.validate();
    const PointCloud centers = cols.empty() ? problem.centers : problem.centers.subset(cols);
    const SchemeWeights w = scheme_weights(scheme);
    const Matrix value = assemble_matrix(problem.kernel, problem.interior, centers, KernelOperator::Value);
    const Matrix lap = assemble_matrix(problem.kernel, problem.interior, centers, KernelOperator::Laplacian);
    const Matrix bnd = assemble_matrix(problem.kernel, problem.boundary, centers, KernelOperator::Value);
    Matrix a(value.rows() + bnd.rows(), centers.size());
    a.topRows(value.rows()) = w.mass * value - (w.diffusion * problem.dt * problem.diffusion) * lap;
    a.bottomRows(bnd.rows()) = bnd;
    return a;
}

Vector rhs(const HeatProblem& problem, Scheme scheme, const SchemeHistory& history, int k) {
    if (k < 1) throw DomainError("step index must be at least 1");
    return stack(interior_rhs(problem, scheme, history, k), sample(problem.boundary, problem.dirichlet, k * problem.dt));
}

Vector greedy_rhs(const HeatProblem& problem, Scheme scheme) {
    if (!problem.initial_laplacian && scheme == Scheme::CN) {
        throw DomainError("Crank-Nicolson greedy right-hand side needs the initial Laplacian");
    }
    SchemeHistory h;
    const Vector u0 = sample(problem.interior, problem.initial);
    h.values = {u0, u0};
    if (problem.initial_laplacian) h.laplacian = sample(problem.interior, problem.initial_laplacian);
    if (scheme == Scheme::SBDF2) {
        // Frozen history: 4 u0 - u0 + 2 dt (2 f0 - f0).
        const Vector f0 = sample(problem.interior, problem.source, 0.0);
        return stack(3.0 * u0 + 2.0 * problem.dt * f0, sample(problem.boundary, problem.dirichlet, problem.dt));
    }
    return rhs(problem, scheme, h, 1);
}

HeatRun run(const HeatProblem& problem, Scheme scheme, const RunOptions& options) {
    problem.validate();
    const int steps = problem.step_count();
    const IndexList cols = options.cols.empty() ? all_indices(problem.centers.size()) : options.cols;
    const PointCloud centers = problem.centers.subset(cols);
    const PointCloud colloc = problem.collocation();
    const auto n_int = static_cast<Index>(problem.interior.size());

    const Matrix phi = assemble_matrix(problem.kernel, colloc, centers, KernelOperator::Value);
    const Matrix lap = assemble_matrix(problem.kernel, problem.interior, centers, KernelOperator::Laplacian);
    auto system = [&](Scheme s) {
        const SchemeWeights w = scheme_weights(s);
        Matrix a = phi;
        a.topRows(n_int) = w.mass * phi.topRows(n_int) - (w.diffusion * problem.dt * problem.diffusion) * lap;
        return a;
    };

    HeatRun out;
    out.selected_cols = static_cast<Index>(cols.size());
    const LeastSquaresSolver main_solver(system(scheme));
    out.factorizations = 1;
    std::optional<LeastSquaresSolver> startup;
    if (scheme == Scheme::SBDF2) {
        startup.emplace(system(Scheme::SBDF1));
        ++out.factorizations;
    }

    Vector lambda = LeastSquaresSolver(phi).solve(sample(colloc, problem.initial));
    Vector values = phi * lambda;
    SchemeHistory history;
    history.values = {values.head(n_int)};
    if (scheme == Scheme::CN) history.laplacian = lap * lambda;
    if (options.keep_coefficients) out.coefficients.push_back(lambda);

    std::vector<double> pending = options.snapshot_times;
    std::sort(pending.begin(), pending.end());
    auto take_snapshots = [&](double t) {
        while (!pending.empty() && pending.front() <= t + 0.5 * problem.dt) {
            out.snapshots.push_back({t, values});
            pending.erase(pending.begin());
        }
    };
    take_snapshots(0.0);

    for (int k = 1; k <= steps; ++k) {
        const double t = k * problem.dt;
        const bool first_sbdf2 = scheme == Scheme::SBDF2 && k == 1;
        const Scheme step_scheme = first_sbdf2 ? Scheme::SBDF1 : scheme;
        const Vector b = rhs(problem, step_scheme, history, k);
        lambda = first_sbdf2 ? startup->solve(b) : main_solver.solve(b);
        out.steps_taken = k;
        if (exceeds(lambda, options.blowup_threshold)) {
            out.blowup = true;
            out.blowup_step = k;
            break;
        }
        values = phi * lambda;
        out.times.push_back(t);
        if (problem.exact) out.errors.push_back(relative_rms_error(values, sample(colloc, problem.exact, t)));
        if (options.keep_coefficients) out.coefficients.push_back(lambda);
        history.values.insert(history.values.begin(), values.head(n_int));
        if (history.values.size() > 2) history.values.pop_back();
        if (scheme == Scheme::CN) history.laplacian = lap * lambda;
        take_snapshots(t);
    }
    out.final_values = values;
    if (!out.blowup && !out.errors.empty()) out.final_rel_rms = out.errors.back();
    return out;
}

double relative_rms_error(const Vector& pred, const Vector& exact) {
    if (pred.size() != exact.size()) throw ShapeError("relative_rms_error: length mismatch");
    const double denom = exact.norm();
    if (denom == 0.0) throw DomainError("relative error undefined for a zero reference");
    return (pred - exact).norm() / denom;
}

void write_snapshot_csv(std::ostream& out, const PointCloud& cloud, const Vector& values) {
    if (static_cast<Index>(cloud.size()) != values.size()) throw ShapeError("snapshot values do not match points");
    const bool three = cloud.dim == 3;
    out << (three ? "x,y,z,value\n" : "x,y,value\n");
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point& p = cloud.points[i];
        out << p.x() << ',' << p.y();
        if (three) out << ',' << p.z();
        out << ',' << values(static_cast<Index>(i)) << '\n';
    }
    out.precision(old_precision);
}

}  // namespace gcol
