#include "seabed/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace seabed::io {

namespace {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ModelKind model_kind_from_string(const std::string& name)
{
    if (name == to_string(ModelKind::RegularisedBoussinesq))
        return ModelKind::RegularisedBoussinesq;
    if (name == to_string(ModelKind::RegularisedBoussinesqWhitham))
        return ModelKind::RegularisedBoussinesqWhitham;
    throw std::runtime_error("archive: unknown model kind '" + name + "'");
}

void write_fields(std::ofstream& out, const std::vector<double>& values)
{
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

std::vector<double> read_field_values(std::ifstream& in, int n)
{
    std::vector<double> values(static_cast<size_t>(n));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in)
        throw std::runtime_error("archive: truncated data file");
    return values;
}

json read_manifest(const std::filesystem::path& manifest_path,
                   const std::string& expected_format)
{
    std::ifstream in(manifest_path);
    if (!in)
        throw std::runtime_error("archive: cannot open manifest " +
                                 manifest_path.string());
    json manifest = json::parse(in);
    if (manifest.value("format", "") != expected_format)
        throw std::runtime_error("archive: manifest " + manifest_path.string() +
                                 " is not a " + expected_format + " file");
    return manifest;
}

std::filesystem::path data_path_for(const std::filesystem::path& manifest_path,
                                    const json& manifest)
{
    return manifest_path.parent_path() /
           manifest.at("data").get<std::string>();
}

} // namespace

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows)
            throw std::invalid_argument("write_csv: ragged columns");

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path.string());
    for (size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << format_double(columns[c][r]);
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("write_csv: write failed for " + path.string());
}

void write_stream_archive(const std::filesystem::path& manifest_path,
                          const MeasurementStream& stream,
                          const ModelSpec& model)
{
    std::filesystem::path data_path = manifest_path;
    data_path.replace_extension(".bin");

    json manifest;
    manifest["format"] = "seabed-stream-v1";
    manifest["byte_order"] = "little-endian";
    manifest["model"] = to_string(model.kind);
    manifest["mu"] = model.mu;
    manifest["n"] = stream.grid().size();
    manifest["dt"] = stream.dt();
    manifest["t0"] = stream.t0();
    manifest["count"] = stream.size();
    manifest["data"] = data_path.filename().string();

    std::ofstream mout(manifest_path);
    if (!mout)
        throw std::runtime_error("archive: cannot open " + manifest_path.string());
    mout << manifest.dump(2) << "\n";

    std::ofstream dout(data_path, std::ios::binary);
    if (!dout)
        throw std::runtime_error("archive: cannot open " + data_path.string());
    for (int j = 0; j < stream.size(); ++j)
        write_fields(dout, stream.eta(j).values());
    if (!dout)
        throw std::runtime_error("archive: write failed for " + data_path.string());
}

MeasurementStream read_stream_archive(const std::filesystem::path& manifest_path,
                                      StreamArchiveInfo* info)
{
    const json manifest = read_manifest(manifest_path, "seabed-stream-v1");
    const int n = manifest.at("n").get<int>();
    const int count = manifest.at("count").get<int>();
    const double dt = manifest.at("dt").get<double>();
    const double t0 = manifest.at("t0").get<double>();

    const Grid grid(n);
    std::ifstream din(data_path_for(manifest_path, manifest), std::ios::binary);
    if (!din)
        throw std::runtime_error("archive: cannot open data for " +
                                 manifest_path.string());
    std::vector<Field> eta;
    eta.reserve(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j)
        eta.emplace_back(grid, read_field_values(din, n));

    if (info) {
        info->model.kind =
            model_kind_from_string(manifest.at("model").get<std::string>());
        info->model.mu = manifest.at("mu").get<double>();
        info->dt = dt;
        info->t0 = t0;
        info->n = n;
        info->count = count;
    }
    return MeasurementStream(t0, dt, std::move(eta));
}

void write_snapshot_archive(const std::filesystem::path& manifest_path,
                            const std::vector<ObserverSnapshot>& snapshots,
                            const ModelSpec& model)
{
    if (snapshots.empty())
        throw std::invalid_argument("archive: no snapshots to write");
    std::filesystem::path data_path = manifest_path;
    data_path.replace_extension(".bin");

    const Grid& grid = snapshots.front().eta_obs.grid();
    json manifest;
    manifest["format"] = "seabed-snapshots-v1";
    manifest["byte_order"] = "little-endian";
    manifest["model"] = to_string(model.kind);
    manifest["mu"] = model.mu;
    manifest["n"] = grid.size();
    manifest["record_spacing"] = snapshots.front().record_spacing;
    manifest["count"] = static_cast<int>(snapshots.size());
    manifest["data"] = data_path.filename().string();
    json times = json::array();
    for (const auto& s : snapshots)
        times.push_back(s.t);
    manifest["times"] = times;
    // Per snapshot: five eta records, then eta~, q~, dx q~.
    manifest["fields_per_snapshot"] = 8;

    std::ofstream mout(manifest_path);
    if (!mout)
        throw std::runtime_error("archive: cannot open " + manifest_path.string());
    mout << manifest.dump(2) << "\n";

    std::ofstream dout(data_path, std::ios::binary);
    if (!dout)
        throw std::runtime_error("archive: cannot open " + data_path.string());
    for (const auto& s : snapshots) {
        if (s.eta_records.size() != 5)
            throw std::invalid_argument("archive: snapshot without five eta records");
        for (const Field& f : s.eta_records)
            write_fields(dout, f.values());
        write_fields(dout, s.eta_obs.values());
        write_fields(dout, s.q_obs.values());
        write_fields(dout, s.qx_obs.values());
    }
    if (!dout)
        throw std::runtime_error("archive: write failed for " + data_path.string());
}

SnapshotArchive read_snapshot_archive(const std::filesystem::path& manifest_path)
{
    const json manifest = read_manifest(manifest_path, "seabed-snapshots-v1");
    const int n = manifest.at("n").get<int>();
    const int count = manifest.at("count").get<int>();
    const double spacing = manifest.at("record_spacing").get<double>();
    const auto& times = manifest.at("times");
    if (static_cast<int>(times.size()) != count)
        throw std::runtime_error("archive: time list does not match count");

    SnapshotArchive archive;
    archive.model.kind =
        model_kind_from_string(manifest.at("model").get<std::string>());
    archive.model.mu = manifest.at("mu").get<double>();

    const Grid grid(n);
    std::ifstream din(data_path_for(manifest_path, manifest), std::ios::binary);
    if (!din)
        throw std::runtime_error("archive: cannot open data for " +
                                 manifest_path.string());
    archive.snapshots.reserve(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        ObserverSnapshot snap{times[static_cast<size_t>(j)].get<double>(),
                              spacing,
                              {},
                              Field(grid),
                              Field(grid),
                              Field(grid)};
        snap.eta_records.reserve(5);
        for (int r = 0; r < 5; ++r)
            snap.eta_records.emplace_back(grid, read_field_values(din, n));
        snap.eta_obs = Field(grid, read_field_values(din, n));
        snap.q_obs = Field(grid, read_field_values(din, n));
        snap.qx_obs = Field(grid, read_field_values(din, n));
        archive.snapshots.push_back(std::move(snap));
    }
    return archive;
}

} // namespace seabed::io
