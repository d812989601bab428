#pragma once

#include "fredpair/acceptance.hpp"
#include "fredpair/lorentz_toy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace fredpair {

/// Batch experiment description. Resolved from CLI flags and/or a JSON
/// config file; CLI flags win.
struct ExperimentConfig {
    std::string experiment;            // sharpness-sweep | graph-sweep |
                                       // homotopy-check | model-bvp | selftest
    int grid = 41;                     // per-axis resolution / corpus size
    std::uint64_t seed = kDefaultSeed;
    Tolerance tol;
    std::string out;                   // CSV path; "" selects "<experiment>.csv"
    std::optional<ModeSpec> mode_spec; // model-bvp only
    /// homotopy-check only: an explicit projection pair (serialized BlockOp
    /// documents under config keys pair.p0 / pair.p1) replaces the random
    /// corpus.
    std::optional<std::pair<BlockOp, BlockOp>> pair;

    void validate() const; // throws ConfigError
    std::string out_path() const;
};

/// Merges `doc` into `cfg` (fields present in the document win).
void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& doc);

struct ExperimentResult {
    std::string csv;          // header plus rows, byte-deterministic per (config, seed)
    nlohmann::json metadata;  // config echo and tolerances, for the sidecar
    int failures = 0;         // violations of the experiment's own checks
    std::string summary;
};

ExperimentResult run_sharpness_sweep(const ExperimentConfig& cfg);
ExperimentResult run_graph_sweep(const ExperimentConfig& cfg);
ExperimentResult run_homotopy_check(const ExperimentConfig& cfg);
ExperimentResult run_model_bvp(const ExperimentConfig& cfg);
ExperimentResult run_selftest(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment; unknown names raise ConfigError.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the CSV to cfg.out_path() and the metadata to
/// cfg.out_path() + ".meta.json".
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

} // namespace fredpair
