#include "seabed/pipeline.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace seabed;

namespace {

PipelineConfig quick_config(const ModelSpec& model)
{
    PipelineConfig config;
    config.model = model;
    config.n = 64;
    config.dt = 2e-3;
    config.epsilon = 0.1;
    config.zeta_guess_constant = -0.25;
    config.snapshot_count = 40;
    config.t_end = 160.0;
    config.decay_threshold = 1e-3;
    config.amplitude = 0.0525;
    return config;
}

} // namespace

TEST_CASE("choose_pipeline_params")
{
    SUBCASE("the production instance: lambda = epsilon, nu = -1 + epsilon^2")
    {
        PipelineConfig config;
        config.model = ModelSpec::boussinesq(1.0);
        config.epsilon = 1e-2;
        config.zeta_guess_constant = -0.25;
        const ObserverParams params = choose_pipeline_params(config);
        CHECK(params.lambda == 1e-2);
        CHECK(params.nu == doctest::Approx(-1.0 + 1e-4).epsilon(1e-15));
        CHECK((1.0 + params.nu) / params.lambda ==
              doctest::Approx(config.epsilon).epsilon(1e-12));
        // Strict decay inequality at k = 1 with zeta_c = -0.25.
        const double denom = 4.0 * (7.0 / 9.0 - 0.25 * 4.0 / 9.0);
        CHECK(1.0 + params.nu > params.lambda * params.lambda / denom);
    }

    SUBCASE("the Whitham variant also satisfies the inequality")
    {
        PipelineConfig config;
        config.model = ModelSpec::whitham(1.0);
        config.epsilon = 1e-2;
        config.zeta_guess_constant = -0.25;
        const ObserverParams params = choose_pipeline_params(config);
        const double p1 = std::tanh(1.0);
        const double denom = 4.0 * (std::tanh(1.0) - 0.25 * p1 * p1);
        CHECK(1.0 + params.nu > params.lambda * params.lambda / denom);
    }

    SUBCASE("epsilon must stay well below mu^2")
    {
        PipelineConfig config;
        config.model = ModelSpec::boussinesq(1.0);
        config.epsilon = 0.2; // > mu^2/10
        CHECK_THROWS_AS(choose_pipeline_params(config), std::invalid_argument);
        config.allow_large_epsilon = true;
        CHECK_NOTHROW(choose_pipeline_params(config));
    }
}

TEST_CASE("harvest times")
{
    PipelineConfig config;
    config.model = ModelSpec::boussinesq(1.0);
    config.n = 512;
    config.dt = 1e-3;
    config.t_end = 2000.0;
    config.snapshot_count = 200;

    const auto times = harvest_times(config);
    REQUIRE(times.size() == 200);
    CHECK(times.front() >= 0.9 * config.t_end - 1e-9);
    CHECK(times.back() <= config.t_end - 2.0 * config.dt + 1e-9);
    const double dt_obs = 2.0 * config.dt;
    for (size_t i = 0; i < times.size(); ++i) {
        const double steps = times[i] / dt_obs;
        CHECK(std::abs(steps - std::llround(steps)) < 1e-6);
        if (i > 0)
            CHECK(times[i] > times[i - 1]);
    }
}

TEST_CASE("series_from_observer applies the stencil to the measured surface")
{
    const Grid g(64);
    const auto bouss = ModelSpec::boussinesq(1.0);
    const BottomProfile zeta = profile(Profile1{}, g);
    const State truth0 = stokes_initial_condition(0.0525, g);
    const State obs0(truth0.eta, Field(g), 0.0);
    const ObserverParams params(6.0, 14.0);

    const ObserverRun run = run_observer_coupled(
        truth0, obs0, zeta, zeta, bouss, params, 1e-3, 0.2, {0.1});
    const SnapshotSeries series = series_from_observer(run);
    REQUIRE(series.count() == 1);
    const Field expected =
        eta_t_stencil(run.snapshots[0].eta_records, 1e-3);
    CHECK(norm_l2(series[0].eta_t - expected) == 0.0);
    CHECK(norm_l2(series[0].eta - run.snapshots[0].eta_records[2]) == 0.0);
    CHECK(norm_l2(series[0].q_x - run.snapshots[0].qx_obs) == 0.0);
}

TEST_CASE("pipeline end-to-end (reduced size)")
{
    SUBCASE("exact constant guess reconstructs at consistency level")
    {
        const auto config = quick_config(ModelSpec::boussinesq(1.0));
        const Grid g(config.n);
        const BottomProfile truth =
            profile(ConstantProfile{config.zeta_guess_constant}, g);
        const ReconstructionReport report =
            reconstruct_from_surface(config, truth);
        REQUIRE(report.error_depth.has_value());
        CHECK(*report.error_depth <= 1e-8);
    }

    SUBCASE("wavy profile improves on the constant guess")
    {
        const auto config = quick_config(ModelSpec::whitham(1.0));
        const Grid g(config.n);
        const BottomProfile truth = profile(Profile1{}, g);
        const ReconstructionReport report =
            reconstruct_from_surface(config, truth);
        const double initial =
            error_metrics(profile(ConstantProfile{config.zeta_guess_constant}, g),
                          truth)
                .depth;
        REQUIRE(report.error_depth.has_value());
        CHECK(*report.error_depth < initial);
    }

    SUBCASE("stream replay matches the coupled path")
    {
        const auto config = quick_config(ModelSpec::boussinesq(1.0));
        const Grid g(config.n);
        const BottomProfile truth = profile(Profile1{}, g);

        const State truth0 = stokes_initial_condition(config.amplitude, g);
        const auto traj =
            simulate(truth0, truth, config.model, config.dt, config.t_end, 1);
        std::vector<Field> eta_records;
        for (const State& s : traj)
            eta_records.push_back(s.eta);
        const MeasurementStream stream(0.0, config.dt, std::move(eta_records));

        const ReconstructionReport coupled =
            reconstruct_from_surface(config, truth);
        const ReconstructionReport replayed =
            reconstruct_from_surface(config, stream, &truth);
        CHECK(norm_l2(coupled.zeta_star.zeta() - replayed.zeta_star.zeta()) <
              1e-12);
        CHECK(coupled.objective ==
              doctest::Approx(replayed.objective).epsilon(1e-10));
    }

    SUBCASE("too-short runs are rejected up front")
    {
        auto config = quick_config(ModelSpec::boussinesq(1.0));
        config.t_end = 20.0; // threshold 1e-3 needs ~138 time units
        const Grid g(config.n);
        const BottomProfile truth = profile(Profile1{}, g);
        CHECK_THROWS_AS(reconstruct_from_surface(config, truth),
                        std::invalid_argument);
    }
}
