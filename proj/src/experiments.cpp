#include "greedy_colloc/experiments.hpp"

#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/patterns.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace gcol {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct KindName {
    ExperimentKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::Heat2dGaussian, "heat2d-gaussian"}, {ExperimentKind::Heat2dMs, "heat2d-ms"},
    {ExperimentKind::Heat3dMs, "heat3d-ms"},             {ExperimentKind::BsSpots2d, "bs-spots-2d"},
    {ExperimentKind::BsStripes2d, "bs-stripes-2d"},      {ExperimentKind::BsTorus, "bs-torus"},
    {ExperimentKind::BsCyclide, "bs-cyclide"},           {ExperimentKind::BsEllipsoid, "bs-ellipsoid"},
};

int heat_dimension(ExperimentKind kind) { return kind == ExperimentKind::Heat3dMs ? 3 : 2; }

std::string format_number(double x) {
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

std::string cell_tag(std::size_t n, double dt) { return "n" + std::to_string(n) + "_dt" + format_number(dt); }

std::size_t default_boundary_ring(std::size_t n, int dim) {
    const double root = dim == 2 ? std::sqrt(static_cast<double>(n)) : std::cbrt(static_cast<double>(n));
    return static_cast<std::size_t>(std::ceil(root - 1e-9));
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

json tolerances_json(const Tolerances& tol) {
    return {{"tau_kappa", tol.tau_kappa}, {"tau_r", tol.tau_r}, {"tau_r_prime", tol.tau_r_prime}};
}

json selection_json(const GreedySelection& sel) {
    return {{"termination", termination_name(sel.termination)},
            {"selected_cols", sel.cols.size()},
            {"selected_rows", sel.rows.size()},
            {"final_condition", sel.final_condition},
            {"final_full_row_residual_inf", sel.final_full_row_residual_inf},
            {"bisection_monotonicity_violated", sel.bisection_monotonicity_violated},
            {"near_singular_solve", sel.near_singular_solve},
            {"tolerances", tolerances_json(sel.tolerances)}};
}

json config_json(const ExperimentConfig& c) {
    json j = {{"experiment", experiment_name(c.experiment)},
              {"dt_list", c.dt_list},
              {"epsilon", c.epsilon},
              {"greedy", c.use_greedy},
              {"t_final", c.t_final}};
    if (is_heat_experiment(c.experiment)) {
        j["n_list"] = c.n_list;
        j["scheme"] = scheme_name(c.scheme);
        j["criteria"] = criteria_name(c.criteria);
        j["boundary_ring"] = c.boundary_ring;
    } else {
        j["n_bulk"] = c.n_bulk;
        j["n_surf"] = c.n_surf;
        j["scheme"] = "sbdf2";
    }
    return j;
}

template <typename T>
T json_get(const json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

// Runs fn(i) for i in [0, count) on `workers` threads; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

void write_state_csv(const fs::path& path, const PointCloud& cloud, const Vector& values) {
    std::ofstream out = open_output(path);
    write_snapshot_csv(out, cloud, values);
}

int run_heat_experiment(const ExperimentConfig& config, const fs::path& dir) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<HeatCellResult> cells = run_heat_sweep(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
        std::ofstream out = open_output(dir / "error_profile.csv");
        out.precision(17);
        out << "dt,n,epsilon,scheme,greedy,termination,selected_cols,final_rel_rms,blowup\n";
        for (const auto& c : cells) {
            out << c.dt << ',' << c.n << ',' << c.epsilon << ',' << scheme_name(c.scheme) << ','
                << (c.greedy ? "true" : "false") << ',' << c.termination << ',' << c.selected_cols << ','
                << c.final_rel_rms << ',' << (c.blowup ? "true" : "false") << '\n';
        }
    }
    const std::vector<ErrorBand> bands = error_bands(cells);
    {
        std::ofstream out = open_output(dir / "error_bands.csv");
        out.precision(17);
        out << "dt,scheme,greedy,stable_runs,min,median,max\n";
        for (const auto& b : bands) {
            out << b.dt << ',' << scheme_name(config.scheme) << ',' << (config.use_greedy ? "true" : "false") << ','
                << b.stable_runs << ',' << b.min << ',' << b.median << ',' << b.max << '\n';
        }
    }
    json cell_list = json::array();
    for (const auto& c : cells) {
        const std::string tag = cell_tag(c.n, c.dt);
        if (c.selection) {
            std::ofstream out = open_output(dir / ("greedy_log_" + tag + ".csv"));
            write_iteration_log_csv(out, *c.selection);
        }
        if (!c.blowup) write_state_csv(dir / ("snapshot_" + tag + ".csv"), c.collocation, c.final_values);
        json entry = {{"n", c.n},
                      {"dt", c.dt},
                      {"total_cols", c.total_cols},
                      {"selected_cols", c.selected_cols},
                      {"termination", c.termination},
                      {"blowup", c.blowup}};
        entry["final_rel_rms"] = c.blowup ? json(nullptr) : json(c.final_rel_rms);
        if (c.selection) entry["greedy"] = selection_json(*c.selection);
        cell_list.push_back(entry);
    }
    json manifest = {{"config", config_json(config)}, {"cells", cell_list}, {"wall_seconds", seconds}};
    const bool any_blowup = std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.blowup; });
    manifest["blowup"] = any_blowup;
    if (!bands.empty()) {
        const double slope = loglog_slope(bands);
        manifest["loglog_slope"] = std::isfinite(slope) ? json(slope) : json(nullptr);
    }
    std::ofstream out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    return 0;
}

json bulk_surface_run_json(const BulkSurfaceProblem& problem, const BulkSurfaceRun& run) {
    json fields = json::object();
    for (std::size_t f = 0; f < 4; ++f) {
        const FieldSelection& sel = run.selections[f];
        json entry = {{"selected_cols", sel.cols.size()}};
        entry["termination"] = sel.greedy ? termination_name(sel.greedy->termination) : "none";
        if (sel.greedy) entry["greedy"] = selection_json(*sel.greedy);
        fields[field_name(static_cast<FieldId>(f))] = entry;
    }
    const BulkSurfaceParams& p = problem.params;
    json j = {{"dt", problem.dt},
              {"t_final", problem.t_final},
              {"n_bulk", problem.geometry.bulk_size()},
              {"n_surf", problem.geometry.surface.size()},
              {"epsilon_bulk", problem.bulk_kernel.epsilon},
              {"epsilon_surface", problem.surface_kernel.epsilon},
              {"mu_bulk", problem.bulk_kernel.mu},
              {"mu_surface", problem.mu_surface},
              {"params",
               {{"a", p.a},
                {"b", p.b},
                {"alpha1", p.alpha1},
                {"alpha2", p.alpha2},
                {"beta1", p.beta1},
                {"beta2", p.beta2},
                {"gamma", p.gamma},
                {"q", p.q},
                {"D_v", p.d_v},
                {"D_s", p.d_s}}},
              {"fields", fields},
              {"blowup", run.blowup},
              {"blowup_step", run.blowup_step},
              {"steps_taken", run.steps_taken},
              {"setup_seconds", run.setup_seconds},
              {"march_seconds", run.march_seconds}};
    if (!run.blowup) {
        const PointCloud bulk = problem.geometry.bulk();
        j["bulk_spots"] = count_spots(bulk, run.final_state.u);
        j["surface_peaks"] = problem.geometry.surface.dim == 2
                                 ? count_curve_peaks(problem.geometry.surface, run.final_state.w)
                                 : count_spots(problem.geometry.surface, run.final_state.w);
        j["bulk_pattern_nontrivial"] = is_nontrivial_pattern(run.final_state.u);
    }
    return j;
}

int run_bulk_surface_experiment(const ExperimentConfig& config, const fs::path& dir) {
    json runs = json::array();
    for (double dt : config.dt_list) {
        const fs::path run_dir = config.dt_list.size() == 1 ? dir : dir / ("dt_" + format_number(dt));
        prepare_output_dir(run_dir);
        const BulkSurfaceProblem problem = make_bulk_surface_problem(config, dt);
        const BulkSurfaceRun run = simulate(problem);
        for (std::size_t f = 0; f < 4; ++f) {
            const std::string name = field_name(static_cast<FieldId>(f));
            const FieldSelection& sel = run.selections[f];
            if (sel.greedy) {
                std::ofstream out = open_output(run_dir / ("greedy_log_" + name + ".csv"));
                write_iteration_log_csv(out, *sel.greedy);
            }
        }
        if (!run.blowup) {
            const PointCloud bulk = problem.geometry.bulk();
            write_state_csv(run_dir / "u.csv", bulk, run.final_state.u);
            write_state_csv(run_dir / "v.csv", bulk, run.final_state.v);
            write_state_csv(run_dir / "w.csv", problem.geometry.surface, run.final_state.w);
            write_state_csv(run_dir / "s.csv", problem.geometry.surface, run.final_state.s);
        }
        json entry = bulk_surface_run_json(problem, run);
        std::ofstream out = open_output(run_dir / "manifest.json");
        out << json({{"config", config_json(config)}, {"run", entry}}).dump(2) << '\n';
        runs.push_back(entry);
    }
    if (config.dt_list.size() > 1) {
        std::ofstream out = open_output(dir / "manifest.json");
        out << json({{"config", config_json(config)}, {"runs", runs}}).dump(2) << '\n';
    }
    return 0;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
    for (const auto& entry : kKindNames) {
        if (entry.kind == kind) return entry.name;
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    for (const auto& entry : kKindNames) {
        if (name == entry.name) return entry.kind;
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

bool is_heat_experiment(ExperimentKind kind) {
    return kind == ExperimentKind::Heat2dGaussian || kind == ExperimentKind::Heat2dMs ||
           kind == ExperimentKind::Heat3dMs;
}

std::string criteria_name(GreedyCriteria c) { return c == GreedyCriteria::Original ? "original" : "new"; }

GreedyCriteria parse_criteria(const std::string& name) {
    if (name == "original") return GreedyCriteria::Original;
    if (name == "new") return GreedyCriteria::New;
    throw ConfigError("unknown greedy criteria '" + name + "' (expected original or new)");
}

void ExperimentConfig::validate() const {
    if (dt_list.empty()) throw ConfigError("dt list is empty");
    for (double dt : dt_list) {
        if (!(dt > 0.0) || dt > 1.0) throw ConfigError("dt must lie in (0, 1]");
        const double steps = std::round(t_final / dt);
        if (!(t_final > 0.0) || steps < 1.0 || std::abs(steps * dt - t_final) > 1e-12 * std::max(1.0, t_final)) {
            throw ConfigError("dt " + format_number(dt) + " does not divide t_final " + format_number(t_final));
        }
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
    if (is_heat_experiment(experiment)) {
        if (n_list.empty()) throw ConfigError("n list is empty");
        for (std::size_t n : n_list) {
            if (n == 0) throw ConfigError("n must be positive");
        }
    } else {
        if (n_surf == 0 || n_bulk <= n_surf) throw ConfigError("need n_bulk > n_surf > 0");
        if (scheme != Scheme::SBDF2) throw ConfigError("bulk-surface experiments use sbdf2 only");
        for (double dt : dt_list) {
            if (std::round(t_final / dt) < 2.0) throw ConfigError("bulk-surface runs need at least two steps");
        }
    }
    if (output_dir.empty()) throw ConfigError("output directory is empty");
}

ExperimentConfig preset(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::Heat2dGaussian:
            c.n_list = {300};
            c.dt_list = {0.02, 0.01, 0.005, 0.0025};
            c.epsilon = 1.0;
            c.criteria = GreedyCriteria::Original;
            c.t_final = 0.1;
            break;
        case ExperimentKind::Heat2dMs:
            for (std::size_t n = 500; n <= 1000; n += 50) c.n_list.push_back(n);
            c.dt_list = {0.02, 0.01, 0.005, 0.0025};
            c.epsilon = 3.0;
            c.t_final = 0.1;
            break;
        case ExperimentKind::Heat3dMs:
            c.n_list = {7000};
            c.dt_list = {0.01};
            c.epsilon = 3.0;
            c.t_final = 0.1;
            break;
        case ExperimentKind::BsSpots2d:
            c.n_bulk = 717;
            c.n_surf = 100;
            c.dt_list = {0.005};
            c.epsilon = 6.0;
            c.t_final = 200.0;
            break;
        case ExperimentKind::BsStripes2d:
            c.n_bulk = 2869;
            c.n_surf = 200;
            c.dt_list = {0.001};
            c.epsilon = 6.0;
            c.t_final = 200.0;
            break;
        case ExperimentKind::BsTorus:
            c.n_bulk = 2644;
            c.n_surf = 1430;
            c.dt_list = {0.01};
            c.epsilon = 4.0;
            c.t_final = 200.0;
            break;
        case ExperimentKind::BsCyclide:
            c.n_bulk = 6760;
            c.n_surf = 2956;
            c.dt_list = {0.01};
            c.epsilon = 4.0;
            c.t_final = 200.0;
            break;
        case ExperimentKind::BsEllipsoid:
            c.n_bulk = 3395;
            c.n_surf = 1164;
            c.dt_list = {0.01};
            c.epsilon = 6.0;
            c.t_final = 200.0;
            break;
    }
    if (!is_heat_experiment(kind)) c.scheme = Scheme::SBDF2;
    return c;
}

void apply_json_config(ExperimentConfig& config, const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [raw_key, value] : root.items()) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "experiment") {
            const ExperimentKind kind = parse_experiment(json_get<std::string>(value, key));
            if (kind != config.experiment) throw ConfigError("config experiment does not match the selected run");
        } else if (key == "n") {
            config.n_list = {json_get<std::size_t>(value, key)};
        } else if (key == "n_list") {
            config.n_list = json_get<std::vector<std::size_t>>(value, key);
        } else if (key == "n_bulk") {
            config.n_bulk = json_get<std::size_t>(value, key);
        } else if (key == "n_surf") {
            config.n_surf = json_get<std::size_t>(value, key);
        } else if (key == "dt") {
            config.dt_list = {json_get<double>(value, key)};
        } else if (key == "dt_list") {
            config.dt_list = json_get<std::vector<double>>(value, key);
        } else if (key == "epsilon") {
            config.epsilon = json_get<double>(value, key);
        } else if (key == "scheme") {
            config.scheme = parse_scheme(json_get<std::string>(value, key));
        } else if (key == "greedy") {
            config.use_greedy = json_get<bool>(value, key);
        } else if (key == "no_greedy") {
            config.use_greedy = !json_get<bool>(value, key);
        } else if (key == "criteria") {
            config.criteria = parse_criteria(json_get<std::string>(value, key));
        } else if (key == "t_final") {
            config.t_final = json_get<double>(value, key);
        } else if (key == "out") {
            config.output_dir = json_get<std::string>(value, key);
        } else if (key == "boundary_ring") {
            config.boundary_ring = json_get<std::size_t>(value, key);
        } else if (key == "workers") {
            config.workers = json_get<unsigned>(value, key);
        } else {
            throw ConfigError("unknown config key '" + raw_key + "'");
        }
    }
}

ExperimentConfig load_config_file(const std::string& path, std::optional<ExperimentKind> fallback) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::optional<ExperimentKind> kind = fallback;
    try {
        const json root = json::parse(text);
        if (root.is_object() && root.contains("experiment") && root["experiment"].is_string()) {
            const ExperimentKind named = parse_experiment(root["experiment"].get<std::string>());
            if (kind && *kind != named) throw ConfigError("config experiment does not match the selected run");
            kind = named;
        }
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!kind) throw ConfigError("no experiment named on the command line or in " + path);
    ExperimentConfig config = preset(*kind);
    apply_json_config(config, text);
    return config;
}

HeatProblem make_heat_cell_problem(const ExperimentConfig& config, std::size_t n, double dt) {
    const int dim = heat_dimension(config.experiment);
    const KernelSpec kernel = config.experiment == ExperimentKind::Heat2dGaussian
                                  ? KernelSpec::gaussian(config.epsilon, dim)
                                  : KernelSpec::matern_sobolev(6.0, config.epsilon, dim);
    const std::size_t ring = config.boundary_ring > 0 ? config.boundary_ring : default_boundary_ring(n, dim);
    return make_sine_heat_problem(dim, n, ring, kernel, dt, config.t_final);
}

HeatCellResult run_heat_cell(const ExperimentConfig& config, std::size_t n, double dt) {
    const HeatProblem problem = make_heat_cell_problem(config, n, dt);
    HeatCellResult cell;
    cell.n = n;
    cell.dt = dt;
    cell.epsilon = config.epsilon;
    cell.scheme = config.scheme;
    cell.greedy = config.use_greedy;
    cell.total_cols = problem.centers.size();

    RunOptions options;
    if (config.use_greedy) {
        const Matrix a = assemble_stationary_matrix(problem, config.scheme);
        const Vector b = greedy_rhs(problem, config.scheme);
        cell.selection = config.criteria == GreedyCriteria::Original
                             ? select_subspace_original(a, b, machine_tolerances())
                             : select_subspace_new(a, b, tolerances_from_dt(dt));
        cell.termination = termination_name(cell.selection->termination);
        options.cols = cell.selection->cols;
    }
    const HeatRun run = gcol::run(problem, config.scheme, options);
    cell.selected_cols = static_cast<std::size_t>(run.selected_cols);
    cell.blowup = run.blowup;
    cell.final_rel_rms = run.blowup ? std::numeric_limits<double>::quiet_NaN() : run.final_rel_rms;
    cell.collocation = problem.collocation();
    cell.final_values = run.final_values;
    return cell;
}

std::vector<HeatCellResult> run_heat_sweep(const ExperimentConfig& config) {
    config.validate();
    if (!is_heat_experiment(config.experiment)) throw ConfigError("not a heat experiment");
    std::vector<std::pair<std::size_t, double>> grid;
    for (std::size_t n : config.n_list) {
        for (double dt : config.dt_list) grid.emplace_back(n, dt);
    }
    std::vector<HeatCellResult> cells(grid.size());
    parallel_for(grid.size(), config.workers,
                 [&](std::size_t i) { cells[i] = run_heat_cell(config, grid[i].first, grid[i].second); });
    return cells;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<ErrorBand> error_bands(const std::vector<HeatCellResult>& cells) {
    std::vector<double> dts;
    for (const auto& c : cells) {
        if (std::find(dts.begin(), dts.end(), c.dt) == dts.end()) dts.push_back(c.dt);
    }
    std::vector<ErrorBand> bands;
    for (double dt : dts) {
        std::vector<double> errors;
        for (const auto& c : cells) {
            if (c.dt == dt && !c.blowup && std::isfinite(c.final_rel_rms)) errors.push_back(c.final_rel_rms);
        }
        ErrorBand band;
        band.dt = dt;
        band.stable_runs = errors.size();
        if (errors.empty()) {
            band.min = band.median = band.max = std::numeric_limits<double>::quiet_NaN();
        } else {
            band.min = *std::min_element(errors.begin(), errors.end());
            band.max = *std::max_element(errors.begin(), errors.end());
            band.median = median_of(errors);
        }
        bands.push_back(band);
    }
    return bands;
}

double loglog_slope(const std::vector<ErrorBand>& bands) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& b : bands) {
        if (b.stable_runs > 0 && b.median > 0.0) {
            x.push_back(std::log(b.dt));
            y.push_back(std::log(b.median));
        }
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

BulkSurfaceProblem make_bulk_surface_problem(const ExperimentConfig& config, double dt) {
    BulkSurfaceProblem p;
    BulkDomain domain = UnitDisk{};
    SurfaceGeometry surface = Circle{};
    switch (config.experiment) {
        case ExperimentKind::BsSpots2d: p.params = BulkSurfaceParams::spots(); break;
        case ExperimentKind::BsStripes2d: p.params = BulkSurfaceParams::stripes(); break;
        case ExperimentKind::BsTorus:
            p.params = BulkSurfaceParams::torus();
            domain = TorusInterior{};
            surface = Torus{};
            break;
        case ExperimentKind::BsCyclide:
            p.params = BulkSurfaceParams::cyclide();
            domain = CyclideInterior{};
            surface = DupinCyclide{};
            break;
        case ExperimentKind::BsEllipsoid:
            p.params = BulkSurfaceParams::ellipsoid();
            domain = EllipsoidInterior{};
            surface = Ellipsoid{};
            break;
        default: throw ConfigError("not a bulk-surface experiment");
    }
    const int dim = domain_dimension(domain);
    p.geometry = make_bulk_surface_geometry(domain, surface, config.n_bulk, config.n_surf);
    p.bulk_kernel = KernelSpec::matern_sobolev(6.0, config.epsilon, dim);
    p.surface_kernel = p.bulk_kernel;
    p.mu_surface = 5.5;
    p.dt = dt;
    p.t_final = config.t_final;
    p.use_greedy = config.use_greedy;
    return p;
}

int run_experiment(const ExperimentConfig& config) {
    try {
        config.validate();
        const fs::path dir(config.output_dir);
        prepare_output_dir(dir);
        return is_heat_experiment(config.experiment) ? run_heat_experiment(config, dir)
                                                     : run_bulk_surface_experiment(config, dir);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace gcol
