#pragma once

#include "greedy_colloc/bulk_surface.hpp"
#include "greedy_colloc/greedy.hpp"
#include "greedy_colloc/timestep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gcol {

enum class ExperimentKind {
    Heat2dGaussian,
    Heat2dMs,
    Heat3dMs,
    BsSpots2d,
    BsStripes2d,
    BsTorus,
    BsCyclide,
    BsEllipsoid
};

std::string experiment_name(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment(const std::string& name);
bool is_heat_experiment(ExperimentKind kind);

enum class GreedyCriteria { Original, New };

std::string criteria_name(GreedyCriteria c);
/// Accepts "original" and "new".
GreedyCriteria parse_criteria(const std::string& name);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Heat2dMs;
    /// Heat experiments: number of interior Halton points per sweep cell.
    std::vector<std::size_t> n_list;
    /// Bulk-surface experiments: total bulk centers (surface points included) and surface points.
    std::size_t n_bulk = 0;
    std::size_t n_surf = 0;
    std::vector<double> dt_list;
    double epsilon = 1.0;
    Scheme scheme = Scheme::CN;
    bool use_greedy = true;
    /// Original runs with machine-precision tolerances; New ties them to dt.
    GreedyCriteria criteria = GreedyCriteria::New;
    double t_final = 0.1;
    /// Points per side of the square (or per face edge of the cube); 0 picks ceil(n^(1/dim)).
    std::size_t boundary_ring = 0;
    std::string output_dir = "out";
    /// Sweep worker threads; 0 uses the hardware concurrency.
    unsigned workers = 0;

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

/// Default configuration of each experiment.
ExperimentConfig preset(ExperimentKind kind);

/// Overrides `config` with the flat keys of a JSON object (experiment, n, n_list, n_bulk,
/// n_surf, dt, dt_list, epsilon, scheme, greedy, criteria, t_final, out, boundary_ring,
/// workers). Unknown keys and ill-typed values raise ConfigError.
void apply_json_config(ExperimentConfig& config, const std::string& json_text);

/// Reads a JSON config file; the `experiment` key (if present) selects the preset that the
/// remaining keys override.
ExperimentConfig load_config_file(const std::string& path, std::optional<ExperimentKind> fallback);

/// One (n, dt) cell of a heat sweep.
struct HeatCellResult {
    std::size_t n = 0;
    double dt = 0.0;
    double epsilon = 0.0;
    Scheme scheme = Scheme::CN;
    bool greedy = false;
    std::string termination = "none";
    std::size_t selected_cols = 0;
    std::size_t total_cols = 0;
    double final_rel_rms = 0.0;
    bool blowup = false;
    std::optional<GreedySelection> selection;
    PointCloud collocation;
    Vector final_values;
};

/// Builds the heat problem of one cell.
HeatProblem make_heat_cell_problem(const ExperimentConfig& config, std::size_t n, double dt);

/// Runs one heat cell: optional greedy selection on the step-one system, then the march.
HeatCellResult run_heat_cell(const ExperimentConfig& config, std::size_t n, double dt);

/// Every (n, dt) cell, n-major, executed on a worker pool. Results are in cell order.
std::vector<HeatCellResult> run_heat_sweep(const ExperimentConfig& config);

struct ErrorBand {
    double dt = 0.0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::size_t stable_runs = 0;
};

/// Median of a non-empty list (mean of the middle pair for even sizes).
double median_of(std::vector<double> values);

/// Min/median/max of the final error over n for each dt, skipping blown-up runs.
std::vector<ErrorBand> error_bands(const std::vector<HeatCellResult>& cells);

/// Least-squares slope of log(error) against log(dt) over bands with at least one stable run.
double loglog_slope(const std::vector<ErrorBand>& bands);

/// Bulk-surface problem for one dt of a pattern experiment.
BulkSurfaceProblem make_bulk_surface_problem(const ExperimentConfig& config, double dt);

/// Writes all outputs of `config` below config.output_dir and returns the process exit
/// code: 0 on completion (blow-ups included), 2 for configuration or output-directory errors.
int run_experiment(const ExperimentConfig& config);

}  // namespace gcol
