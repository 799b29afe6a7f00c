#pragma once

#include "seabed/dynamics.hpp"
#include "seabed/spectral.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

// Flat key = value experiment configuration shared by the CLI subcommands.
// Lines starting with '#' are comments; unknown keys are rejected.

namespace seabed {

struct ExperimentConfig {
    // model + discretisation
    std::string model = "boussinesq"; // boussinesq | boussinesq-whitham
    double mu = 1.0;
    int n = 512;
    double dt = 1e-3;

    // experiment setup
    std::string profile = "profile1"; // profile1 | profile2 | constant
    double zeta_const = -0.25;        // used when profile = constant
    double amplitude = 0.0525;
    double t_end = 10.0;
    int record_every = 1;

    // observer parameters: give (lambda, nu) directly or a target decay rate
    // (lambda = 2*decay) with a safety margin for the nu rule.
    std::optional<double> lambda;
    std::optional<double> nu;
    std::optional<double> decay;
    double margin = 0.25;
    int snapshot_count = 200;

    // reconstruction
    double epsilon = 0.01;
    double zeta_guess = -0.25;
    double threshold = 1e-4;
    bool allow_large_epsilon = false;

    // eigenspectrum study
    std::string eigen_m = "1,10,100,200";
    double eigen_amplitude = 0.1;

    // optional archive inputs
    std::string stream;    // measurement-stream manifest (replay modes)
    std::string snapshots; // snapshot-archive manifest (solve-only mode)

    ModelSpec model_spec() const;
    ProfileKind profile_kind() const;
    std::vector<int> eigen_m_list() const;
};

ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Applies one "key=value" override on top of a parsed config.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Cross-field validation (ranges, no-island, lattice compatibility).
void validate(const ExperimentConfig& config);

} // namespace seabed
