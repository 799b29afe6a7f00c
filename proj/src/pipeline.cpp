#include "seabed/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seabed {

namespace {

void validate_config(const PipelineConfig& config)
{
    if (!(config.epsilon > 0.0))
        throw std::invalid_argument("pipeline: epsilon must be positive");
    const double mu2 = config.model.mu * config.model.mu;
    if (config.epsilon > mu2 / 10.0 && !config.allow_large_epsilon)
        throw std::invalid_argument(
            "pipeline: epsilon must satisfy epsilon <= mu^2/10 (epsilon = " +
            std::to_string(config.epsilon) + ", mu^2/10 = " +
            std::to_string(mu2 / 10.0) + "); set allow_large_epsilon to override");
    if (!(config.dt > 0.0) || !(config.t_end > 0.0))
        throw std::invalid_argument("pipeline: dt and t_end must be positive");
    if (config.snapshot_count < 1)
        throw std::invalid_argument("pipeline: snapshot_count must be >= 1");
    if (!(config.decay_threshold > 0.0) || !(config.decay_threshold < 1.0))
        throw std::invalid_argument("pipeline: decay threshold must lie in (0, 1)");
    if (!(1.0 + config.zeta_guess_constant > 0.0))
        throw std::invalid_argument("pipeline: constant guess violates no-island");
}

double required_duration(double lambda, double threshold)
{
    return 2.0 * std::log(1.0 / threshold) / lambda;
}

void check_duration(const PipelineConfig& config, const ObserverParams& params)
{
    const double needed = required_duration(params.lambda, config.decay_threshold);
    if (config.t_end < needed)
        throw std::invalid_argument(
            "pipeline: run too short for the decay threshold; need t_end >= " +
            std::to_string(needed) + " (configured " +
            std::to_string(config.t_end) + ")");
}

} // namespace

ObserverParams choose_pipeline_params(const PipelineConfig& config)
{
    validate_config(config);
    const double lambda = config.epsilon;
    const double nu = -1.0 + config.epsilon * lambda;
    const double p1 = multiplier_P(config.model, 1);
    const double denom = multiplier_omega2(config.model, 1) +
                         config.zeta_guess_constant * p1 * p1;
    if (!(denom > 0.0))
        throw std::invalid_argument(
            "pipeline: omega(1)^2 + zeta_c P(1)^2 is not positive; the "
            "constant guess is too deep for this model/mu");
    if (!(1.0 + nu > lambda * lambda / (4.0 * denom)))
        throw std::invalid_argument(
            "pipeline: (lambda, nu) from epsilon fail the strict decay "
            "inequality (1+nu) > lambda^2/(4(omega(1)^2 + zeta_c P(1)^2)); "
            "decrease epsilon or raise the guess");
    return ObserverParams(lambda, nu);
}

std::vector<double> harvest_times(const PipelineConfig& config)
{
    const double dt_obs = 2.0 * config.dt;
    const long long osteps = std::llround(config.t_end / dt_obs);
    // Harvest window: last tenth of the run, ending one observer step early
    // so the forward stencil records exist.
    const long long last = osteps - 1;
    const long long first =
        std::max<long long>(1, std::llround(0.9 * static_cast<double>(osteps)));
    const long long span = last - first;
    if (span + 1 < config.snapshot_count)
        throw std::invalid_argument(
            "pipeline: harvest window too short for the snapshot count");
    std::vector<double> times;
    times.reserve(static_cast<size_t>(config.snapshot_count));
    long long prev = -1;
    for (int j = 0; j < config.snapshot_count; ++j) {
        const long long step =
            config.snapshot_count == 1
                ? first
                : first + std::llround(static_cast<double>(j) * span /
                                       (config.snapshot_count - 1));
        if (step == prev)
            throw std::invalid_argument(
                "pipeline: snapshot times collide; reduce snapshot_count");
        prev = step;
        times.push_back(static_cast<double>(step) * dt_obs);
    }
    return times;
}

SnapshotSeries series_from_observer(const ObserverRun& run)
{
    if (run.snapshots.empty())
        throw std::invalid_argument("series_from_observer: no recorded snapshots");
    std::vector<Snapshot> snaps;
    snaps.reserve(run.snapshots.size());
    for (const ObserverSnapshot& rec : run.snapshots) {
        snaps.push_back(Snapshot{
            rec.t, rec.eta_records[2],
            eta_t_stencil(rec.eta_records, rec.record_spacing), rec.qx_obs});
    }
    return SnapshotSeries(std::move(snaps));
}

ReconstructionReport reconstruct_from_surface(const PipelineConfig& config,
                                              const BottomProfile& zeta_true)
{
    validate_config(config);
    const ObserverParams params = choose_pipeline_params(config);
    check_duration(config, params);

    const Grid grid(config.n);
    if (!(zeta_true.grid() == grid))
        throw std::invalid_argument("pipeline: truth profile grid mismatch");

    const State truth0 = stokes_initial_condition(config.amplitude, grid);
    // Observer starts from the measured surface and zero velocity potential.
    const State obs0(truth0.eta, Field(grid), 0.0);
    const BottomProfile guess =
        profile(ConstantProfile{config.zeta_guess_constant}, grid);

    const ObserverRun run =
        run_observer_coupled(truth0, obs0, zeta_true, guess, config.model,
                             params, config.dt, config.t_end,
                             harvest_times(config));
    const SnapshotSeries series = series_from_observer(run);
    return solve_reconstruction(series, config.model, &zeta_true);
}

ReconstructionReport reconstruct_from_surface(const PipelineConfig& config,
                                              const MeasurementStream& stream,
                                              const BottomProfile* zeta_true)
{
    validate_config(config);
    const ObserverParams params = choose_pipeline_params(config);
    check_duration(config, params);

    const Grid grid = stream.grid();
    if (grid.size() != config.n)
        throw std::invalid_argument("pipeline: stream grid does not match config");
    // config.dt is the measurement cadence in replay mode; the observer
    // advances at twice that, as in the coupled run.
    if (std::abs(stream.dt() - config.dt) > 1e-9 * config.dt)
        throw std::invalid_argument(
            "pipeline: stream spacing differs from config.dt; set dt to the "
            "measurement cadence");
    if (stream.t_end() < config.t_end)
        throw std::invalid_argument(
            "pipeline: measurement record too short; need coverage to t = " +
            std::to_string(config.t_end) + " but the stream ends at t = " +
            std::to_string(stream.t_end()));

    const State obs0(stream.eta(0), Field(grid), stream.t0());
    const BottomProfile guess =
        profile(ConstantProfile{config.zeta_guess_constant}, grid);

    std::vector<double> times = harvest_times(config);
    for (double& t : times)
        t += stream.t0();

    const ObserverRun run = run_observer_replay(
        stream, obs0, guess, config.model, params, 2.0 * stream.dt(),
        stream.t0() + config.t_end, times);
    const SnapshotSeries series = series_from_observer(run);
    return solve_reconstruction(series, config.model, zeta_true);
}

} // namespace seabed
