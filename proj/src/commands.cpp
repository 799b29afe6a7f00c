#include "seabed/commands.hpp"

#include "seabed/diagnostics.hpp"
#include "seabed/io.hpp"
#include "seabed/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>

namespace seabed::cli {

namespace {

using nlohmann::json;

ObserverParams resolve_observer_params(const ExperimentConfig& config,
                                       const BottomProfile& zeta)
{
    if (config.lambda && config.nu)
        return ObserverParams(*config.lambda, *config.nu);
    if (config.decay) {
        const double zeta_c = std::min(0.0, min_value(zeta.zeta()));
        return params_for_decay(*config.decay, zeta_c, config.model_spec(),
                                config.margin);
    }
    throw std::invalid_argument(
        "config: observer runs need either (lambda, nu) or decay");
}

std::vector<double> uniform_record_times(double dt_obs, long long first,
                                         long long last, int count)
{
    if (last - first + 1 < count)
        throw std::invalid_argument(
            "config: snapshot_count exceeds the recordable window");
    std::vector<double> times;
    times.reserve(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        const long long step =
            count == 1 ? first
                       : first + std::llround(static_cast<double>(j) *
                                              (last - first) / (count - 1));
        times.push_back(static_cast<double>(step) * dt_obs);
    }
    return times;
}

void ensure_outdir(const std::filesystem::path& outdir)
{
    std::filesystem::create_directories(outdir);
}

} // namespace

void cmd_simulate(const ExperimentConfig& config,
                  const std::filesystem::path& outdir)
{
    validate(config);
    ensure_outdir(outdir);

    const Grid grid(config.n);
    const ModelSpec model = config.model_spec();
    const BottomProfile zeta = profile(config.profile_kind(), grid);
    const State initial = stokes_initial_condition(config.amplitude, grid);

    std::vector<State> trajectory;
    if (config.t_end == 0.0)
        trajectory.push_back(initial);
    else
        trajectory = simulate(initial, zeta, model, config.dt, config.t_end,
                              config.record_every);

    std::vector<Field> eta_records;
    eta_records.reserve(trajectory.size());
    for (const State& s : trajectory)
        eta_records.push_back(s.eta);
    const MeasurementStream stream(initial.time,
                                   config.record_every * config.dt,
                                   std::move(eta_records));
    io::write_stream_archive(outdir / "stream.json", stream, model);

    const ConservedSeries monitors = conserved_monitors(trajectory, zeta, model);
    io::write_csv(outdir / "monitors.csv",
                  {"time", "hamiltonian", "mean_eta"},
                  {monitors.time, monitors.hamiltonian, monitors.mean_eta});
}

void cmd_observe(const ExperimentConfig& config,
                 const std::filesystem::path& outdir)
{
    validate(config);
    ensure_outdir(outdir);

    const ModelSpec model = config.model_spec();

    if (config.stream.empty()) {
        // Coupled run: truth generated alongside, bottom known exactly.
        const Grid grid(config.n);
        const BottomProfile zeta = profile(config.profile_kind(), grid);
        const ObserverParams params = resolve_observer_params(config, zeta);
        const State truth0 = stokes_initial_condition(config.amplitude, grid);
        const State obs0(truth0.eta, Field(grid), 0.0);

        const long long osteps = std::llround(config.t_end / (2.0 * config.dt));
        const auto times = uniform_record_times(2.0 * config.dt, 1, osteps - 1,
                                                config.snapshot_count);
        const ObserverRun run =
            run_observer_coupled(truth0, obs0, zeta, zeta, model, params,
                                 config.dt, config.t_end, times);

        std::vector<double> predicted;
        predicted.reserve(run.errors.time.size());
        for (double t : run.errors.time)
            predicted.push_back(run.predicted_error(t));
        io::write_csv(outdir / "errors.csv",
                      {"time", "err_eta", "err_qx", "err_q", "predicted"},
                      {run.errors.time, run.errors.err_eta, run.errors.err_qx,
                       run.errors.err_q, predicted});
        io::write_snapshot_archive(outdir / "snapshots.json", run.snapshots,
                                   model);
        return;
    }

    // Replay from a stored stream; no truth, so only the predicted decay.
    io::StreamArchiveInfo info;
    const MeasurementStream stream =
        io::read_stream_archive(config.stream, &info);
    const Grid grid = stream.grid();
    const BottomProfile zeta = profile(config.profile_kind(), grid);
    const ObserverParams params = resolve_observer_params(config, zeta);
    const State obs0(stream.eta(0), Field(grid), stream.t0());

    const double dt_obs = 2.0 * stream.dt();
    const long long osteps = std::llround((config.t_end - stream.t0()) / dt_obs);
    auto times = uniform_record_times(dt_obs, 1, osteps - 1,
                                      config.snapshot_count);
    for (double& t : times)
        t += stream.t0();

    const ObserverRun run = run_observer_replay(
        stream, obs0, zeta, model, params, dt_obs, config.t_end, times);

    std::vector<double> time_axis, predicted;
    for (long long s = 0; s <= osteps; ++s) {
        const double t = stream.t0() + static_cast<double>(s) * dt_obs;
        time_axis.push_back(t);
        predicted.push_back(run.predicted_error(t - stream.t0()));
    }
    io::write_csv(outdir / "errors.csv", {"time", "predicted"},
                  {time_axis, predicted});
    io::write_snapshot_archive(outdir / "snapshots.json", run.snapshots, model);
}

void cmd_eigen(const ExperimentConfig& config,
               const std::filesystem::path& outdir)
{
    validate(config);
    ensure_outdir(outdir);

    const Grid grid(config.n);
    const ModelSpec model = config.model_spec();

    std::vector<double> col_m, col_index, col_abs;
    for (int m : config.eigen_m_list()) {
        std::vector<Snapshot> snaps;
        snaps.reserve(static_cast<size_t>(m));
        for (int j = 1; j <= m; ++j) {
            const double tj = 2.0 * std::numbers::pi * j / m;
            Field qx(grid);
            for (int i = 0; i < grid.size(); ++i)
                qx[i] = config.eigen_amplitude * std::cos(grid.point(i) - tj);
            snaps.push_back(Snapshot{tj, Field(grid), Field(grid), qx});
        }
        const auto magnitudes =
            eigenspectrum(SnapshotSeries(std::move(snaps)), model);
        for (size_t i = 0; i < magnitudes.size(); ++i) {
            col_m.push_back(m);
            col_index.push_back(static_cast<double>(i));
            col_abs.push_back(magnitudes[i]);
        }
    }
    io::write_csv(outdir / "spectrum.csv", {"m", "index", "abs_eigenvalue"},
                  {col_m, col_index, col_abs});
}

void cmd_reconstruct(const ExperimentConfig& config,
                     const std::filesystem::path& outdir)
{
    validate(config);
    ensure_outdir(outdir);

    const auto t_start = std::chrono::steady_clock::now();
    const ModelSpec model = config.model_spec();

    std::optional<ReconstructionReport> report;
    std::optional<BottomProfile> truth;
    std::optional<ObserverParams> params;
    Grid grid(config.n);

    if (!config.snapshots.empty()) {
        // Solve-only mode on a stored snapshot archive.
        const io::SnapshotArchive archive =
            io::read_snapshot_archive(config.snapshots);
        if (archive.model.kind != model.kind || archive.model.mu != model.mu)
            throw std::invalid_argument(
                "reconstruct: snapshot archive was produced with a different "
                "model/mu than configured");
        grid = archive.snapshots.front().eta_obs.grid();
        if (config.profile != "none")
            truth = profile(config.profile_kind(), grid);
        ObserverRun run{ObserverParams(1.0, 0.0), 0.0, {}, archive.snapshots};
        const SnapshotSeries series = series_from_observer(run);
        report = solve_reconstruction(series, model,
                                      truth ? &*truth : nullptr);
    } else {
        PipelineConfig pipeline{model,
                                config.n,
                                config.dt,
                                config.epsilon,
                                config.zeta_guess,
                                config.snapshot_count,
                                config.t_end,
                                config.threshold,
                                config.amplitude,
                                config.allow_large_epsilon};
        params = choose_pipeline_params(pipeline);
        if (!config.stream.empty()) {
            const MeasurementStream stream =
                io::read_stream_archive(config.stream);
            grid = stream.grid();
            if (config.profile != "none")
                truth = profile(config.profile_kind(), grid);

            // Re-run the harvesting observer here so the snapshot archive can
            // be emitted alongside the report.
            const State obs0(stream.eta(0), Field(grid), stream.t0());
            const BottomProfile guess =
                profile(ConstantProfile{config.zeta_guess}, grid);
            std::vector<double> times = harvest_times(pipeline);
            for (double& t : times)
                t += stream.t0();
            const ObserverRun run = run_observer_replay(
                stream, obs0, guess, model, *params, 2.0 * stream.dt(),
                stream.t0() + config.t_end, times);
            io::write_snapshot_archive(outdir / "snapshots.json",
                                       run.snapshots, model);
            const SnapshotSeries series = series_from_observer(run);
            report = solve_reconstruction(series, model,
                                          truth ? &*truth : nullptr);
        } else {
            if (config.profile == "none")
                throw std::invalid_argument(
                    "reconstruct: the coupled mode needs a truth profile");
            truth = profile(config.profile_kind(), grid);
            const State truth0 =
                stokes_initial_condition(config.amplitude, grid);
            const State obs0(truth0.eta, Field(grid), 0.0);
            const BottomProfile guess =
                profile(ConstantProfile{config.zeta_guess}, grid);
            const ObserverRun run = run_observer_coupled(
                truth0, obs0, *truth, guess, model, *params, config.dt,
                config.t_end, harvest_times(pipeline));
            io::write_snapshot_archive(outdir / "snapshots.json",
                                       run.snapshots, model);
            const SnapshotSeries series = series_from_observer(run);
            report = solve_reconstruction(series, model, &*truth);
        }
    }

    const double runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();

    // zeta.csv: recovered profile (and the truth when known).
    std::vector<double> xs = grid.points();
    std::vector<std::string> header{"x", "zeta_star"};
    std::vector<std::vector<double>> columns{
        xs, report->zeta_star.zeta().values()};
    if (truth) {
        header.push_back("zeta_true");
        columns.push_back(truth->zeta().values());
    }
    io::write_csv(outdir / "zeta.csv", header, columns);

    std::vector<double> index(report->eigenvalues.size());
    std::vector<double> magnitude(report->eigenvalues.size());
    for (size_t i = 0; i < report->eigenvalues.size(); ++i) {
        index[i] = static_cast<double>(i);
        magnitude[i] = std::abs(report->eigenvalues[i]);
    }
    io::write_csv(outdir / "spectrum.csv", {"index", "abs_eigenvalue"},
                  {index, magnitude});

    json metrics;
    metrics["model"] = to_string(model.kind);
    metrics["mu"] = model.mu;
    metrics["n"] = grid.size();
    metrics["snapshot_count"] = config.snapshot_count;
    metrics["profile"] = config.profile;
    metrics["epsilon"] = config.epsilon;
    metrics["objective"] = report->objective;
    metrics["runtime_seconds"] = runtime_seconds;
    metrics["lambda"] = params ? json(params->lambda) : json(nullptr);
    metrics["nu"] = params ? json(params->nu) : json(nullptr);
    metrics["error_depth"] =
        report->error_depth ? json(*report->error_depth) : json(nullptr);
    metrics["error_profile"] =
        report->error_profile ? json(*report->error_profile) : json(nullptr);
    if (truth) {
        const BottomProfile guess =
            profile(ConstantProfile{config.zeta_guess}, grid);
        metrics["initial_guess_error_depth"] =
            error_metrics(guess, *truth).depth;
    } else {
        metrics["initial_guess_error_depth"] = nullptr;
    }
    std::ofstream mout(outdir / "metrics.json");
    if (!mout)
        throw std::runtime_error("reconstruct: cannot write metrics.json");
    mout << metrics.dump(2) << "\n";
}

} // namespace seabed::cli
