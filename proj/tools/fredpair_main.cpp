// Command-line entry point for the Fredholm-pair laboratory: runs the
// parameter sweeps and the selftest, writing CSV results plus a JSON
// metadata sidecar.
//
// Exit codes: 0 success, 1 test/verification failure, 2 configuration error.

#include "fredpair/experiments.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

int main(int argc, char** argv) {
    CLI::App app{"fredpair: numerical laboratory for Fredholm pairs of projections"};

    std::optional<std::string> experiment;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_rank;
    std::optional<double> tol_proj;
    std::optional<std::string> out;
    std::string config_path;

    app.add_option("--experiment", experiment,
                   "one of: sharpness-sweep, graph-sweep, homotopy-check, model-bvp, selftest");
    app.add_option("--grid", grid, "per-axis grid resolution / corpus size (>= 2)");
    app.add_option("--seed", seed, "corpus seed");
    app.add_option("--tol-rank", tol_rank, "relative singular-value cutoff");
    app.add_option("--tol-proj", tol_proj, "projection-axiom slack / decision band");
    app.add_option("--out", out, "output CSV path (metadata sidecar goes next to it)");
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    fredpair::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream file(config_path);
            if (!file) throw fredpair::ConfigError("cannot read config file '" + config_path + "'");
            nlohmann::json doc;
            try {
                file >> doc;
            } catch (const nlohmann::json::exception& e) {
                throw fredpair::ConfigError(std::string("config parse error: ") + e.what());
            }
            fredpair::apply_config_json(cfg, doc);
        }
        if (experiment) cfg.experiment = *experiment;
        if (grid) cfg.grid = *grid;
        if (seed) cfg.seed = *seed;
        if (tol_rank) cfg.tol.rank_tol = *tol_rank;
        if (tol_proj) cfg.tol.proj_tol = *tol_proj;
        if (out) cfg.out = *out;
        if (cfg.experiment.empty())
            throw fredpair::ConfigError("no experiment selected (use --experiment or --config)");
        cfg.validate();
    } catch (const fredpair::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        const fredpair::ExperimentResult result = fredpair::run_experiment(cfg);
        if (cfg.experiment != "selftest" || !cfg.out.empty())
            fredpair::write_outputs(cfg, result);
        std::cout << result.summary << "\n";
        if (cfg.experiment != "selftest" || !cfg.out.empty())
            std::cout << "wrote " << cfg.out_path() << " and " << cfg.out_path()
                      << ".meta.json\n";
        return result.failures == 0 ? 0 : 1;
    } catch (const fredpair::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
