#pragma once

#include "seabed/observer.hpp"
#include "seabed/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

// Persistence for figure-class datasets: CSV emission (17 significant
// digits, enough to round-trip doubles) and the binary archives for
// measurement streams and observer snapshots. An archive is a JSON manifest
// naming grid size, mu, model kind and cadence, next to a flat
// little-endian float64 data file referenced from the manifest.

namespace seabed::io {

// Writes a CSV file with a header row; all columns must share one length.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct StreamArchiveInfo {
    ModelSpec model;
    double dt = 0.0;
    double t0 = 0.0;
    int n = 0;
    int count = 0;
};

// Measurement stream (eta records at a uniform cadence).
void write_stream_archive(const std::filesystem::path& manifest_path,
                          const MeasurementStream& stream,
                          const ModelSpec& model);
MeasurementStream read_stream_archive(const std::filesystem::path& manifest_path,
                                      StreamArchiveInfo* info = nullptr);

// Observer snapshot archive: per snapshot the five measured eta records for
// the stencil plus the observer state (eta~, q~, dx q~).
void write_snapshot_archive(const std::filesystem::path& manifest_path,
                            const std::vector<ObserverSnapshot>& snapshots,
                            const ModelSpec& model);

struct SnapshotArchive {
    ModelSpec model;
    std::vector<ObserverSnapshot> snapshots;
};
SnapshotArchive read_snapshot_archive(const std::filesystem::path& manifest_path);

} // namespace seabed::io
