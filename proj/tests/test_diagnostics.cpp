#include "seabed/diagnostics.hpp"

#include "seabed/observer.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace seabed;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("linear error energy")
{
    const Grid g(64);
    const auto bouss = ModelSpec::boussinesq(1.0);
    const BottomProfile flat = profile(ConstantProfile{0.0}, g);

    SUBCASE("zero error carries zero energy")
    {
        CHECK(linear_error_energy(Field(g), Field(g), flat, 0.0, bouss) == 0.0);
    }

    SUBCASE("constant eta error carries zero energy")
    {
        Field c(g);
        for (int i = 0; i < g.size(); ++i)
            c[i] = 0.7;
        CHECK(std::abs(linear_error_energy(c, Field(g), flat, 0.3, bouss)) <
              1e-14);
    }

    SUBCASE("single cosine mode: (1/2)(7/9) pi")
    {
        Field eta_e(g);
        for (int i = 0; i < g.size(); ++i)
            eta_e[i] = std::cos(g.point(i));
        CHECK(linear_error_energy(eta_e, Field(g), flat, 0.0, bouss) ==
              doctest::Approx(0.5 * 7.0 / 9.0 * pi).epsilon(1e-12));
    }

    SUBCASE("positive for non-constant zero-mean errors over admissible bottoms")
    {
        const BottomProfile zeta = profile(Profile1{}, g);
        for (unsigned seed : {1u, 2u, 3u, 4u}) {
            const Field eta_e = oracles::random_band_field(g, seed, 15, 0.5);
            const double e =
                linear_error_energy(eta_e, Field(g), zeta, -0.9999, bouss);
            CHECK(e > 0.0);
        }
    }
}

TEST_CASE("energy lower-bound constants")
{
    CHECK(energy_lower_bound_constant(ModelSpec::boussinesq(1.0)) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(energy_lower_bound_constant(ModelSpec::whitham(1.0)) ==
          doctest::Approx(1.0 - std::tanh(1.0)).epsilon(1e-15));
    // C2 -> 0 as mu -> 0.
    CHECK(energy_lower_bound_constant(ModelSpec::whitham(1e-3)) < 1e-6);
}

TEST_CASE("potential-form lower bounds over random zero-mean fields")
{
    const Grid g(64);

    SUBCASE("Boussinesq: Q(f) >= C1 ||f_x||^2")
    {
        const auto bouss = ModelSpec::boussinesq(1.0);
        const double c1 = energy_lower_bound_constant(bouss);
        for (unsigned seed = 0; seed < 100; ++seed) {
            const Field f = oracles::random_band_field(g, seed, 20, 1.0);
            const Field fx = apply_multiplier(f, dx_symbol());
            const double q = potential_quadratic_form(f, bouss);
            CHECK(q >= c1 * inner_l2(fx, fx) - 1e-10);
        }
    }

    SUBCASE("Whitham: Q(f) >= (C2/mu) weighted seminorm")
    {
        const auto whit = ModelSpec::whitham(1.0);
        const double c2 = energy_lower_bound_constant(whit);
        for (unsigned seed = 0; seed < 100; ++seed) {
            const Field f = oracles::random_band_field(g, seed + 500, 20, 1.0);
            const double q = potential_quadratic_form(f, whit);
            CHECK(q >= c2 / whit.mu * weighted_h_half_seminorm(f, whit.mu) -
                       1e-10);
        }
    }
}

TEST_CASE("decay-rate fitting")
{
    SUBCASE("recovers an exact exponential rate")
    {
        std::vector<double> t, v;
        for (int i = 0; i <= 200; ++i) {
            t.push_back(0.01 * i);
            v.push_back(std::exp(-3.0 * 0.01 * i));
        }
        CHECK(fit_decay_rate(t, v, 0.0, 2.0) ==
              doctest::Approx(3.0).epsilon(1e-6));
    }

    SUBCASE("a constant series has zero rate")
    {
        std::vector<double> t, v;
        for (int i = 0; i < 50; ++i) {
            t.push_back(0.1 * i);
            v.push_back(0.25);
        }
        CHECK(std::abs(fit_decay_rate(t, v, 0.0, 5.0)) < 1e-12);
    }

    SUBCASE("too few samples in the window")
    {
        std::vector<double> t{0.0, 1.0, 2.0, 3.0};
        std::vector<double> v{1.0, 0.5, 0.25, 0.125};
        CHECK_THROWS_AS(fit_decay_rate(t, v, 0.0, 3.0), std::invalid_argument);
    }

    SUBCASE("plateau and pre-saturation window")
    {
        std::vector<double> t, v;
        for (int i = 0; i <= 1000; ++i) {
            t.push_back(0.01 * i);
            v.push_back(std::max(std::exp(-3.0 * t.back()), 1e-9));
        }
        CHECK(plateau_level(v) == doctest::Approx(1e-9));
        const auto [lo, hi] = presaturation_window(t, v);
        // First drop below 3e-9 happens near t = ln(3e9)/3 = 7.27.
        CHECK(lo == doctest::Approx(0.727).epsilon(0.01));
        CHECK(hi == doctest::Approx(6.55).epsilon(0.01));
    }
}

TEST_CASE("conserved monitors")
{
    const Grid g(64);
    const auto bouss = ModelSpec::boussinesq(1.0);
    const BottomProfile zeta = profile(Profile1{}, g);

    SUBCASE("rest trajectory")
    {
        std::vector<State> rest(3, State(Field{g}, Field{g}, 0.0));
        rest[1].time = 0.1;
        rest[2].time = 0.2;
        const ConservedSeries s =
            conserved_monitors(rest, profile(ConstantProfile{0.0}, g), bouss);
        for (double h : s.hamiltonian)
            CHECK(h == 0.0);
        for (double m : s.mean_eta)
            CHECK(m == 0.0);
    }

    SUBCASE("short production run: mean exact, energy drift tiny")
    {
        const State initial = stokes_initial_condition(0.0525, g);
        const auto traj = simulate(initial, zeta, bouss, 1e-3, 1.0, 100);
        const ConservedSeries s = conserved_monitors(traj, zeta, bouss);
        for (double m : s.mean_eta)
            CHECK(std::abs(m - s.mean_eta.front()) < 1e-13);
        for (double h : s.hamiltonian)
            CHECK(std::abs(h - s.hamiltonian.front()) <
                  1e-9 * std::abs(s.hamiltonian.front()));
    }
}

TEST_CASE("observer error energy is non-increasing (linear mode)")
{
    const Grid g(64);
    const double dt = 1e-3;
    const State truth0(Field{g}, Field{g}, 0.0);
    const BottomProfile zeta = profile(Profile1{}, g);

    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        const ObserverParams params =
            params_for_decay(1.0, std::min(0.0, min_value(zeta.zeta())), model,
                             0.3);
        const State obs0(oracles::random_band_field(g, 61, 10, 1e-2),
                         oracles::random_band_field(g, 62, 10, 1e-2), 0.0);
        std::vector<double> record_times;
        for (long long s = 1; s <= 1999; ++s)
            record_times.push_back(2.0 * dt * static_cast<double>(s));
        const ObserverRun run =
            run_observer_coupled(truth0, obs0, zeta, zeta, model, params, dt,
                                 4.0, record_times, true);

        std::vector<double> times;
        std::vector<Field> eta_err;
        for (const auto& snap : run.snapshots) {
            times.push_back(snap.t);
            eta_err.push_back(snap.eta_obs - snap.eta_records[2]);
        }
        const EnergyReport report = observer_error_energy_report(
            times, eta_err, zeta, params.lambda, params.nu, model);

        for (size_t i = 1; i < report.energy.size(); ++i)
            CHECK(report.energy[i] - report.energy[i - 1] <= 1e-10);

        // dE/dt tracks the dissipation at second order in the record step.
        double worst = 0.0;
        const double h = times[1] - times[0];
        for (size_t i = 1; i + 1 < report.energy.size(); ++i) {
            const double dEdt =
                (report.energy[i + 1] - report.energy[i - 1]) / (2.0 * h);
            worst = std::max(worst, std::abs(dEdt - report.dissipation[i]));
        }
        CHECK(worst < 5e-4 * std::abs(report.dissipation.front()));
    }
}
