#pragma once

#include "seabed/config.hpp"

#include <filesystem>

// The four CLI entry points. Each validates the configuration, runs the
// experiment and emits CSV/JSON datasets into the output directory. Errors
// surface as exceptions; the binary maps them to exit codes
// (2 configuration, 3 solver, 4 blow-up, 1 anything else).

namespace seabed::cli {

// Forward run: writes stream.json/.bin (measurement stream) and
// monitors.csv (time, hamiltonian, mean_eta).
void cmd_simulate(const ExperimentConfig& config,
                  const std::filesystem::path& outdir);

// Observer run, coupled (default) or replaying a stored stream; writes
// errors.csv and snapshots.json/.bin.
void cmd_observe(const ExperimentConfig& config,
                 const std::filesystem::path& outdir);

// Eigenspectrum study of the inversion operator for the travelling-wave
// data q = a sin(x - t_j); writes spectrum.csv with one block per M.
void cmd_eigen(const ExperimentConfig& config,
               const std::filesystem::path& outdir);

// Full reconstruction; writes zeta.csv, spectrum.csv, metrics.json and (for
// the observer-backed modes) the harvested snapshots.json/.bin.
void cmd_reconstruct(const ExperimentConfig& config,
                     const std::filesystem::path& outdir);

} // namespace seabed::cli
