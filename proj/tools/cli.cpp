#include "greedy_colloc/cli.hpp"

#include "greedy_colloc/errors.hpp"
#include "greedy_colloc/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

namespace gcol {
namespace {

struct RunFlags {
    std::string experiment;
    std::optional<double> dt;
    std::vector<double> dt_list;
    std::optional<std::size_t> n;
    std::vector<std::size_t> n_list;
    std::optional<std::size_t> n_bulk;
    std::optional<std::size_t> n_surf;
    std::optional<double> epsilon;
    std::optional<std::string> scheme;
    bool no_greedy = false;
    std::optional<std::string> criteria;
    std::optional<double> t_final;
    std::optional<std::string> out;
    std::optional<std::string> config;
    std::optional<std::size_t> boundary_ring;
    std::optional<unsigned> workers;
};

// File values first, then preset defaults, with command-line flags overriding both.
ExperimentConfig resolve(const RunFlags& f) {
    std::optional<ExperimentKind> kind;
    if (!f.experiment.empty()) kind = parse_experiment(f.experiment);
    ExperimentConfig c;
    if (f.config) {
        c = load_config_file(*f.config, kind);
    } else {
        if (!kind) throw ConfigError("an experiment name or --config is required");
        c = preset(*kind);
    }
    if (f.dt) c.dt_list = {*f.dt};
    if (!f.dt_list.empty()) c.dt_list = f.dt_list;
    if (f.n) c.n_list = {*f.n};
    if (!f.n_list.empty()) c.n_list = f.n_list;
    if (f.n_bulk) c.n_bulk = *f.n_bulk;
    if (f.n_surf) c.n_surf = *f.n_surf;
    if (f.epsilon) c.epsilon = *f.epsilon;
    if (f.scheme) c.scheme = parse_scheme(*f.scheme);
    if (f.no_greedy) c.use_greedy = false;
    if (f.criteria) c.criteria = parse_criteria(*f.criteria);
    if (f.t_final) c.t_final = *f.t_final;
    if (f.out) c.output_dir = *f.out;
    if (f.boundary_ring) c.boundary_ring = *f.boundary_ring;
    if (f.workers) c.workers = *f.workers;
    return c;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Greedy kernel collocation experiments", "greedy-colloc"};
    app.require_subcommand(1);
    RunFlags f;
    CLI::App* run = app.add_subcommand("run", "Run one experiment preset with optional overrides");
    run->add_option("experiment", f.experiment,
                    "heat2d-gaussian, heat2d-ms, heat3d-ms, bs-spots-2d, bs-stripes-2d, bs-torus, bs-cyclide, "
                    "bs-ellipsoid");
    auto* dt = run->add_option("--dt", f.dt, "Time step");
    run->add_option("--dt-list", f.dt_list, "Comma-separated time steps")->delimiter(',')->excludes(dt);
    auto* n = run->add_option("--n", f.n, "Interior points (heat experiments)");
    run->add_option("--n-list", f.n_list, "Comma-separated interior point counts")->delimiter(',')->excludes(n);
    run->add_option("--n-bulk", f.n_bulk, "Bulk centers including surface points");
    run->add_option("--n-surf", f.n_surf, "Surface points");
    run->add_option("--epsilon", f.epsilon, "Kernel shape parameter");
    run->add_option("--scheme", f.scheme, "cn, sbdf1 or sbdf2");
    run->add_flag("--no-greedy", f.no_greedy, "Use every trial center");
    run->add_option("--criteria", f.criteria, "Greedy stopping rules: original or new");
    run->add_option("--t-final", f.t_final, "Final time");
    run->add_option("--out", f.out, "Output directory");
    run->add_option("--config", f.config, "JSON file with flat keys mirroring the flags");
    run->add_option("--boundary-ring", f.boundary_ring, "Boundary points per side (heat experiments)");
    run->add_option("--workers", f.workers, "Sweep worker threads (0 = hardware concurrency)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const ExperimentConfig config = resolve(f);
        return run_experiment(config);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gcol
