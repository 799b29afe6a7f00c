// Fast acceptance suite: every reproduction target except the full-length
// end-to-end reconstruction (which lives in acceptance_full). One line per
// criterion, nonzero exit if any fails.

#include "acceptance_support.hpp"
#include "oracles.hpp"

#include "seabed/diagnostics.hpp"
#include "seabed/inversion.hpp"
#include "seabed/observer.hpp"
#include "seabed/pipeline.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace seabed;
using acceptance::fmt;

namespace {

constexpr double pi = std::numbers::pi;

const char* short_name(const ModelSpec& model)
{
    return model.kind == ModelKind::RegularisedBoussinesq ? "boussinesq"
                                                          : "whitham";
}

SnapshotSeries travelling_wave_series(const Grid& g, int count)
{
    std::vector<Snapshot> snaps;
    for (int j = 1; j <= count; ++j) {
        const double tj = 2.0 * pi * j / count;
        Field qx(g);
        for (int i = 0; i < g.size(); ++i)
            qx[i] = 0.1 * std::cos(g.point(i) - tj);
        snaps.push_back(Snapshot{tj, Field(g), Field(g), qx});
    }
    return SnapshotSeries(std::move(snaps));
}

// Criterion 1: consistent-data recovery at production size.
bool consistent_recovery(std::string& detail)
{
    bool ok = true;
    std::string parts;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        for (int which : {1, 2}) {
            const Grid g(512);
            const BottomProfile zeta =
                which == 1 ? profile(Profile1{}, g) : profile(Profile2{}, g);
            const State initial = stokes_initial_condition(0.0525, g);
            // 200 snapshots, ten steps apart, eta_t from the 5-point stencil.
            const auto traj = simulate(initial, zeta, model, 1e-3, 2.01, 1);
            const SnapshotSeries series =
                series_from_trajectory(traj, model, 200);
            const ReconstructionReport report =
                solve_reconstruction(series, model, &zeta);
            const double eb = report.error_depth.value();
            ok = ok && eb <= 1e-8;
            parts += fmt("%s/profile%d E_b=%.2e ", short_name(model), which, eb);
        }
    }
    detail = parts;
    return ok;
}

// Criterion 2: 1% velocity error amplifies into a 3..9% depth error.
bool velocity_sensitivity(std::string& detail)
{
    bool ok = true;
    std::string parts;
    std::mt19937 rng(2024);
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        const Grid g(512);
        const BottomProfile zeta = profile(Profile1{}, g);
        const State initial = stokes_initial_condition(0.0525, g);
        const auto traj = simulate(initial, zeta, model, 1e-3, 2.01, 1);
        const SnapshotSeries clean = series_from_trajectory(traj, model, 200);

        std::vector<Snapshot> noisy;
        for (int j = 0; j < clean.count(); ++j) {
            Snapshot s = clean[j];
            // Smooth low-mode perturbation at 1% relative L2 size, fresh per
            // snapshot, mimicking a smooth velocity-estimation error.
            Field bump =
                oracles::random_band_field(g, rng(), 8, 1.0);
            const double scale = 0.01 * norm_l2(s.q_x) / norm_l2(bump);
            for (int i = 0; i < g.size(); ++i)
                s.q_x[i] += scale * bump[i];
            noisy.push_back(std::move(s));
        }
        const ReconstructionReport report = solve_reconstruction(
            SnapshotSeries(std::move(noisy)), model, &zeta);
        const double eb = report.error_depth.value();
        ok = ok && eb >= 0.03 && eb <= 0.09;
        parts += fmt("%s E_b=%.3f ", short_name(model), eb);
    }
    detail = parts;
    return ok;
}

// Criterion 3: the M-summation pushes eigenvalues away from zero, much more
// effectively for the non-compact Whitham operator.
bool eigenspectrum_regularisation(std::string& detail)
{
    const Grid g(256);
    double tail_ratio[2];
    bool ok = true;
    std::string parts;
    int idx = 0;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        const auto m1 = eigenspectrum(travelling_wave_series(g, 1), model);
        const auto m200 = eigenspectrum(travelling_wave_series(g, 200), model);
        const double smallest_m1 = m1.back();
        const double smallest_m200 = m200.back();
        ok = ok && smallest_m200 >= 10.0 * smallest_m1;
        tail_ratio[idx] = m200[199] / m200[0];
        parts += fmt("%s min|eig| M=1:%.1e M=200:%.1e tail=%.1e ",
                     short_name(model), smallest_m1, smallest_m200,
                     tail_ratio[idx]);
        ++idx;
    }
    ok = ok && tail_ratio[1] >= 1e3 * tail_ratio[0];
    detail = parts + fmt("whitham/bouss tail ratio=%.1e", tail_ratio[1] / tail_ratio[0]);
    return ok;
}

// Criterion 4: nonlinear observer decay at lambda/2 = 3 with the q error
// saturating above 1e-3 while the velocity error passes below it.
bool observer_decay(std::string& detail)
{
    bool ok = true;
    std::string parts;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        for (int which : {1, 2}) {
            const Grid g(512);
            const BottomProfile zeta =
                which == 1 ? profile(Profile1{}, g) : profile(Profile2{}, g);
            const ObserverParams params(6.0, 14.0);
            const State truth0 = stokes_initial_condition(0.0525, g);
            const State obs0(truth0.eta, Field(g), 0.0);
            const ObserverRun run = run_observer_coupled(
                truth0, obs0, zeta, zeta, model, params, 1e-3, 10.0, {});

            const auto [qlo, qhi] =
                presaturation_window(run.errors.time, run.errors.err_qx);
            const double rate_qx =
                fit_decay_rate(run.errors.time, run.errors.err_qx, qlo, qhi);
            const auto [elo, ehi] =
                presaturation_window(run.errors.time, run.errors.err_eta);
            const double rate_eta =
                fit_decay_rate(run.errors.time, run.errors.err_eta, elo, ehi);
            const double q_floor = plateau_level(run.errors.err_q);
            const double qx_min =
                *std::min_element(run.errors.err_qx.begin(),
                                  run.errors.err_qx.end());
            const bool case_ok = std::abs(rate_qx - 3.0) <= 0.3 &&
                                 std::abs(rate_eta - 3.0) <= 0.3 &&
                                 q_floor > 1e-3 && qx_min < 1e-3;
            ok = ok && case_ok;
            parts += fmt("%s/p%d rates(%.2f,%.2f) q_floor=%.1e ",
                         short_name(model), which, rate_eta, rate_qx, q_floor);
        }
    }
    detail = parts;
    return ok;
}

// Criterion 5: constant-coefficient theorem in the linearized test mode.
bool constant_coefficient_theorem(std::string& detail)
{
    const Grid g(64);
    const double dt = 1e-3;
    const ObserverParams params(6.0, 14.0);
    bool ok = true;
    std::string parts;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        const BottomProfile flat = profile(ConstantProfile{0.0}, g);
        const State truth0(Field{g}, Field{g}, 0.0);

        // Excite every mode below Nyquist with O(1) coefficients plus a
        // mean offset in q (whose k = 0 error must stay frozen).
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(0.2, 1.0);
        std::vector<std::complex<double>> ce(g.num_modes(), 0.0),
            cq(g.num_modes(), 0.0);
        for (int k = 1; k < g.nyquist(); ++k) {
            ce[k] = std::complex<double>(u(rng), u(rng));
            cq[k] = std::complex<double>(u(rng), -u(rng));
        }
        cq[0] = 0.55;
        const State obs0(synthesize(g, ce), synthesize(g, cq), 0.0);

        std::vector<double> record_times;
        for (int s = 25; s <= 1500; s += 25)
            record_times.push_back(2.0 * dt * s);
        const ObserverRun run = run_observer_coupled(
            truth0, obs0, flat, flat, model, params, dt, 3.1, record_times,
            true);

        // Project each mode's (eta, q) error onto the analytic eigenvector
        // of the 2x2 mode system; the projection coefficient must decay at
        // exactly lambda/2.
        double worst_rate_err = 0.0;
        double worst_mean_drift = 0.0;
        for (int k = 1; k < g.nyquist(); ++k) {
            const double om2 = multiplier_omega2(model, k);
            const std::complex<double> disc =
                std::sqrt(std::complex<double>(
                    params.lambda * params.lambda / 4.0 -
                    (1.0 + params.nu) * om2));
            const std::complex<double> p_plus =
                -params.lambda / 2.0 + disc;
            const std::complex<double> p_minus =
                -params.lambda / 2.0 - disc;

            std::vector<double> t, mag;
            for (const auto& snap : run.snapshots) {
                const auto eta_hat = spectrum(snap.eta_obs);
                const auto q_hat = spectrum(snap.q_obs);
                // Solve [v+ v-] [a b]^T = (eta_k, q_k) with
                // v± = (p±, -(1+nu)).
                const std::complex<double> e = eta_hat[k];
                const std::complex<double> q = q_hat[k];
                const std::complex<double> det =
                    -(1.0 + params.nu) * (p_plus - p_minus);
                const std::complex<double> a =
                    (e * (-(1.0 + params.nu)) - p_minus * q) / det;
                t.push_back(snap.t);
                mag.push_back(std::abs(a));
            }
            const double rate = fit_decay_rate(t, mag, t.front(), t.back());
            worst_rate_err =
                std::max(worst_rate_err, std::abs(rate - 3.0) / 3.0);
        }
        for (const auto& snap : run.snapshots)
            worst_mean_drift = std::max(worst_mean_drift,
                                        std::abs(mean(snap.q_obs) - 0.55));
        const bool case_ok = worst_rate_err <= 0.01 && worst_mean_drift <= 1e-10;
        ok = ok && case_ok;
        parts += fmt("%s max|rate-3|/3=%.2e mean-q drift=%.1e ",
                     short_name(model), worst_rate_err, worst_mean_drift);
    }
    detail = parts;
    return ok;
}

// Criterion 7: conservation over T = 10 in the production configuration.
bool conservation(std::string& detail)
{
    bool ok = true;
    std::string parts;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        const Grid g(512);
        const BottomProfile zeta = profile(Profile1{}, g);
        const State initial = stokes_initial_condition(0.0525, g);
        const auto traj = simulate(initial, zeta, model, 1e-3, 10.0, 100);
        const ConservedSeries mon = conserved_monitors(traj, zeta, model);
        double mean_drift = 0.0, h_drift = 0.0;
        for (size_t i = 0; i < mon.time.size(); ++i) {
            mean_drift = std::max(mean_drift,
                                  std::abs(mon.mean_eta[i] - mon.mean_eta[0]));
            h_drift = std::max(h_drift,
                               std::abs(mon.hamiltonian[i] - mon.hamiltonian[0]) /
                                   std::abs(mon.hamiltonian[0]));
        }
        ok = ok && mean_drift <= 1e-12 && h_drift <= 1e-8;
        parts += fmt("%s mean_drift=%.1e H_drift=%.1e ", short_name(model),
                     mean_drift, h_drift);
    }
    detail = parts;
    return ok;
}

// Criterion 8: dense-matrix oracle equivalence at n = 32.
bool oracle_equivalence(std::string& detail)
{
    const Grid g(32);
    double worst = 0.0;
    for (const auto& model :
         {ModelSpec::boussinesq(1.0), ModelSpec::whitham(1.0)}) {
        // omega^2 and P dx as matrices versus the transform path.
        for (const auto& sym : {omega2_symbol(model), p_dx_symbol(model)}) {
            const Eigen::MatrixXd dense =
                oracles::dense_multiplier_matrix(g, sym);
            for (int c = 0; c < g.size(); ++c) {
                Field basis(g);
                basis[c] = 1.0;
                const Field col = apply_multiplier(basis, sym);
                for (int r = 0; r < g.size(); ++r)
                    worst = std::max(worst, std::abs(dense(r, c) - col[r]));
            }
        }
        // Assembled inversion operator versus its dense counterpart.
        const SnapshotSeries series = travelling_wave_series(g, 5);
        const Eigen::MatrixXd A = assemble_operator(series, model);
        const Eigen::MatrixXd K =
            oracles::dense_multiplier_matrix(g, p2_dxx_symbol(model));
        const Eigen::MatrixXd P =
            oracles::dense_multiplier_matrix(g, p_symbol(model));
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(g.size(), g.size());
        for (int j = 0; j < series.count(); ++j) {
            Eigen::VectorXd qx(g.size());
            for (int i = 0; i < g.size(); ++i)
                qx(i) = series[j].q_x[i];
            const Eigen::VectorXd pqx = P * qx;
            dense += pqx.asDiagonal() * K * pqx.asDiagonal();
        }
        dense = 0.5 * (dense + dense.transpose());
        worst = std::max(worst, (A - dense).cwiseAbs().maxCoeff());
    }
    detail = fmt("max entrywise deviation %.2e", worst);
    return worst <= 1e-12;
}

// Criterion 9: linear-observer energy decay plus the Boussinesq potential
// lower bound with C1(1) = 1/3.
bool energy_diagnostics(std::string& detail)
{
    const Grid g(64);
    const auto bouss = ModelSpec::boussinesq(1.0);
    const BottomProfile zeta = profile(Profile1{}, g);
    const double dt = 1e-3;

    const ObserverParams params =
        params_for_decay(1.0, std::min(0.0, min_value(zeta.zeta())), bouss, 0.3);
    const State truth0(Field{g}, Field{g}, 0.0);
    const State obs0(oracles::random_band_field(g, 404, 12, 1e-2),
                     oracles::random_band_field(g, 405, 12, 1e-2), 0.0);
    std::vector<double> record_times;
    for (int s = 1; s <= 1999; ++s)
        record_times.push_back(2.0 * dt * s);
    const ObserverRun run = run_observer_coupled(
        truth0, obs0, zeta, zeta, bouss, params, dt, 4.0, record_times, true);

    std::vector<double> times;
    std::vector<Field> eta_err;
    for (const auto& snap : run.snapshots) {
        times.push_back(snap.t);
        eta_err.push_back(snap.eta_obs - snap.eta_records[2]);
    }
    const EnergyReport report = observer_error_energy_report(
        times, eta_err, zeta, params.lambda, params.nu, bouss);
    double worst_increase = 0.0;
    for (size_t i = 1; i < report.energy.size(); ++i)
        worst_increase = std::max(worst_increase,
                                  report.energy[i] - report.energy[i - 1]);

    const double c1 = energy_lower_bound_constant(bouss);
    bool bound_ok = std::abs(c1 - 1.0 / 3.0) < 1e-15;
    for (unsigned seed = 0; seed < 100; ++seed) {
        const Field f = oracles::random_band_field(g, seed, 20, 1.0);
        const Field fx = apply_multiplier(f, dx_symbol());
        if (potential_quadratic_form(f, bouss) <
            c1 * inner_l2(fx, fx) - 1e-10)
            bound_ok = false;
    }
    detail = fmt("max energy increase %.1e, C1(1)=%.6f bound %s",
                 worst_increase, c1, bound_ok ? "holds" : "violated");
    return worst_increase <= 1e-10 && bound_ok;
}

} // namespace

int main()
{
    acceptance::Reporter reporter;
    reporter.criterion("criterion 1: consistent-data recovery (E_b <= 1e-8)",
                       consistent_recovery);
    reporter.criterion("criterion 2: 1% q_x error gives E_b in [3%, 9%]",
                       velocity_sensitivity);
    reporter.criterion(
        "criterion 3: eigenspectrum regularisation by snapshot count",
        eigenspectrum_regularisation);
    reporter.criterion("criterion 4: observer decay at lambda/2 = 3 +- 0.3",
                       observer_decay);
    reporter.criterion(
        "criterion 5: constant-coefficient decay theorem (linearized)",
        constant_coefficient_theorem);
    reporter.criterion(
        "criterion 7: mean(eta) and Hamiltonian conservation over T = 10",
        conservation);
    reporter.criterion("criterion 8: dense-matrix oracle equivalence at n = 32",
                       oracle_equivalence);
    reporter.criterion(
        "criterion 9: energy decay and the C1(1) = 1/3 lower bound",
        energy_diagnostics);
    return reporter.exit_code();
}
