#include "seabed/observer.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seabed {

namespace {

// Map a requested time to an integer step index on the lattice step*dt.
long long step_index(double t, double dt, const char* what)
{
    const double raw = t / dt;
    const long long idx = std::llround(raw);
    if (std::abs(raw - static_cast<double>(idx)) > 1e-6)
        throw std::invalid_argument(std::string(what) +
                                    ": time not aligned to the step lattice");
    return idx;
}

struct ObserverStepper {
    detail::Engine& eng;
    double lambda;
    double nu;
    bool linear;
    std::vector<double> k_eta, k_q, eta_s, q_s, acc_eta, acc_q;

    ObserverStepper(detail::Engine& e, const ObserverParams& p, bool lin)
        : eng(e), lambda(p.lambda), nu(p.nu), linear(lin)
    {
        const size_t n = static_cast<size_t>(e.grid().size());
        k_eta.resize(n);
        k_q.resize(n);
        eta_s.resize(n);
        q_s.resize(n);
        acc_eta.resize(n);
        acc_q.resize(n);
    }

    // One RK4 step of length h for the observer, with measured eta supplied
    // at the start, midpoint and end of the step.
    void step(std::vector<double>& eta, std::vector<double>& q,
              const double* eta_m0, const double* eta_m1, const double* eta_m2,
              const double* zeta, double h)
    {
        const size_t n = eta.size();
        eng.observer_rhs(eta.data(), q.data(), eta_m0, zeta, lambda, nu,
                         linear, k_eta.data(), k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] = k_eta[i];
            acc_q[i] = k_q[i];
            eta_s[i] = eta[i] + 0.5 * h * k_eta[i];
            q_s[i] = q[i] + 0.5 * h * k_q[i];
        }
        eng.observer_rhs(eta_s.data(), q_s.data(), eta_m1, zeta, lambda, nu,
                         linear, k_eta.data(), k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] += 2.0 * k_eta[i];
            acc_q[i] += 2.0 * k_q[i];
            eta_s[i] = eta[i] + 0.5 * h * k_eta[i];
            q_s[i] = q[i] + 0.5 * h * k_q[i];
        }
        eng.observer_rhs(eta_s.data(), q_s.data(), eta_m1, zeta, lambda, nu,
                         linear, k_eta.data(), k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] += 2.0 * k_eta[i];
            acc_q[i] += 2.0 * k_q[i];
            eta_s[i] = eta[i] + h * k_eta[i];
            q_s[i] = q[i] + h * k_q[i];
        }
        eng.observer_rhs(eta_s.data(), q_s.data(), eta_m2, zeta, lambda, nu,
                         linear, k_eta.data(), k_q.data());
        for (size_t i = 0; i < n; ++i) {
            eta[i] += h / 6.0 * (acc_eta[i] + k_eta[i]);
            q[i] += h / 6.0 * (acc_q[i] + k_q[i]);
        }
    }
};

// Truth-side RK4 over the plain (or linearized) model.
struct TruthStepper {
    detail::Engine& eng;
    bool linear;
    std::vector<double> k_eta, k_q, eta_s, q_s, acc_eta, acc_q;

    TruthStepper(detail::Engine& e, bool lin) : eng(e), linear(lin)
    {
        const size_t n = static_cast<size_t>(e.grid().size());
        k_eta.resize(n);
        k_q.resize(n);
        eta_s.resize(n);
        q_s.resize(n);
        acc_eta.resize(n);
        acc_q.resize(n);
    }

    void step(std::vector<double>& eta, std::vector<double>& q,
              const double* zeta, double h)
    {
        const size_t n = eta.size();
        eng.swe_rhs(eta.data(), q.data(), zeta, linear, k_eta.data(),
                    k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] = k_eta[i];
            acc_q[i] = k_q[i];
            eta_s[i] = eta[i] + 0.5 * h * k_eta[i];
            q_s[i] = q[i] + 0.5 * h * k_q[i];
        }
        eng.swe_rhs(eta_s.data(), q_s.data(), zeta, linear, k_eta.data(),
                    k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] += 2.0 * k_eta[i];
            acc_q[i] += 2.0 * k_q[i];
            eta_s[i] = eta[i] + 0.5 * h * k_eta[i];
            q_s[i] = q[i] + 0.5 * h * k_q[i];
        }
        eng.swe_rhs(eta_s.data(), q_s.data(), zeta, linear, k_eta.data(),
                    k_q.data());
        for (size_t i = 0; i < n; ++i) {
            acc_eta[i] += 2.0 * k_eta[i];
            acc_q[i] += 2.0 * k_q[i];
            eta_s[i] = eta[i] + h * k_eta[i];
            q_s[i] = q[i] + h * k_q[i];
        }
        eng.swe_rhs(eta_s.data(), q_s.data(), zeta, linear, k_eta.data(),
                    k_q.data());
        for (size_t i = 0; i < n; ++i) {
            eta[i] += h / 6.0 * (acc_eta[i] + k_eta[i]);
            q[i] += h / 6.0 * (acc_q[i] + k_q[i]);
        }
    }
};

double diff_norm(const std::vector<double>& a, const std::vector<double>& b,
                 double spacing)
{
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s * spacing);
}

void check_finite_or_throw(const std::vector<double>& v, double t,
                           const char* name)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw BlowupError(t, name);
}

} // namespace

ObserverParams::ObserverParams(double lambda_, double nu_)
    : lambda(lambda_), nu(nu_)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("ObserverParams: lambda must be positive");
    if (!(1.0 + nu > 0.0))
        throw std::invalid_argument("ObserverParams: 1 + nu must be positive");
}

ObserverParams params_for_decay(double d, double zeta_c,
                                const ModelSpec& model, double margin)
{
    if (!(d > 0.0))
        throw std::invalid_argument("params_for_decay: decay rate must be positive");
    if (!(1.0 + zeta_c > 0.0))
        throw std::invalid_argument(
            "params_for_decay: 1 + zeta_c must be positive (no-island)");
    if (!(margin > 0.0))
        throw std::invalid_argument(
            "params_for_decay: margin must be strictly positive (the decay "
            "condition is a strict inequality)");
    const double p1 = multiplier_P(model, 1);
    const double denom = multiplier_omega2(model, 1) + zeta_c * p1 * p1;
    if (!(denom > 0.0))
        throw std::invalid_argument(
            "params_for_decay: omega(1)^2 + zeta_c P(1)^2 is not positive; "
            "zeta_c too negative for this model/mu");
    const double lambda = 2.0 * d;
    const double one_plus_nu = (1.0 + margin) * lambda * lambda / (4.0 * denom);
    return ObserverParams(lambda, one_plus_nu - 1.0);
}

StateRate observer_rhs(const State& obs, const Field& eta_measured,
                       const BottomProfile& zeta_guess, const ModelSpec& model,
                       const ObserverParams& params, bool linearized)
{
    if (!(obs.eta.grid() == eta_measured.grid()) ||
        !(obs.eta.grid() == zeta_guess.grid()))
        throw std::invalid_argument("observer_rhs: grid mismatch");
    auto& eng = detail::engine_for(obs.eta.grid(), model);
    StateRate rate{Field(obs.eta.grid()), Field(obs.eta.grid())};
    eng.observer_rhs(obs.eta.values().data(), obs.q.values().data(),
                     eta_measured.values().data(),
                     zeta_guess.zeta().values().data(), params.lambda,
                     params.nu, linearized, rate.deta.values().data(),
                     rate.dq.values().data());
    if (!all_finite(rate.deta))
        throw BlowupError(obs.time, "observer eta_t");
    if (!all_finite(rate.dq))
        throw BlowupError(obs.time, "observer q_t");
    return rate;
}

MeasurementStream::MeasurementStream(double t0, double dt,
                                     std::vector<Field> eta)
    : t0_(t0), dt_(dt), eta_(std::move(eta))
{
    if (eta_.empty())
        throw std::invalid_argument("MeasurementStream: empty stream");
    if (!(dt_ > 0.0))
        throw std::invalid_argument("MeasurementStream: spacing must be positive");
    for (const auto& f : eta_)
        if (!(f.grid() == eta_.front().grid()))
            throw std::invalid_argument("MeasurementStream: mixed grids");
}

double ObserverRun::predicted_error(double t) const
{
    return std::exp(-params.lambda * t / 2.0);
}

ObserverRun run_observer_coupled(const State& truth_initial,
                                 const State& obs_initial,
                                 const BottomProfile& zeta_true,
                                 const BottomProfile& zeta_guess,
                                 const ModelSpec& model,
                                 const ObserverParams& params, double dt,
                                 double t_end,
                                 const std::vector<double>& record_times,
                                 bool linearized)
{
    const Grid grid = truth_initial.eta.grid();
    if (!(obs_initial.eta.grid() == grid) || !(zeta_true.grid() == grid) ||
        !(zeta_guess.grid() == grid))
        throw std::invalid_argument("run_observer_coupled: grid mismatch");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("run_observer_coupled: dt, t_end must be positive");

    const double base = truth_initial.time;
    const long long nsteps =
        step_index(t_end - base, dt, "run_observer_coupled t_end");
    if (nsteps < 2 || nsteps % 2 != 0)
        throw std::invalid_argument(
            "run_observer_coupled: t_end must be an even multiple of dt");
    const long long osteps = nsteps / 2;

    // Record times live on the observer lattice, >= 2 dt from both ends so
    // the five-point eta stencil fits.
    std::vector<long long> record_osteps;
    record_osteps.reserve(record_times.size());
    for (double t : record_times) {
        const long long r = step_index(t - base, 2.0 * dt, "record time");
        if (r < 1 || 2 * r + 2 > nsteps)
            throw std::invalid_argument(
                "record time must be at least 2 dt from both run ends");
        record_osteps.push_back(r);
    }
    std::sort(record_osteps.begin(), record_osteps.end());

    auto& eng = detail::engine_for(grid, model);
    TruthStepper truth(eng, linearized);
    ObserverStepper obs(eng, params, linearized);

    std::vector<double> t_eta = truth_initial.eta.values();
    std::vector<double> t_q = truth_initial.q.values();
    std::vector<double> o_eta = obs_initial.eta.values();
    std::vector<double> o_q = obs_initial.q.values();

    ObserverRun run{params, 2.0 * dt, {}, {}};
    run.snapshots.reserve(record_osteps.size());

    const double spacing = grid.spacing();
    const size_t n = static_cast<size_t>(grid.size());
    std::vector<double> qx_truth(n), qx_obs(n);
    const auto dx_tab = [&] {
        std::vector<std::complex<double>> t(
            static_cast<size_t>(grid.num_modes()));
        for (int k = 0; k < grid.num_modes(); ++k)
            t[static_cast<size_t>(k)] = std::complex<double>(0.0, k);
        t.back() = 0.0;
        return t;
    }();
    std::vector<std::complex<double>> hat(static_cast<size_t>(grid.num_modes()));
    auto derivative = [&](const std::vector<double>& in,
                          std::vector<double>& out) {
        eng.fft().forward(in.data(), hat.data());
        for (size_t k = 0; k < hat.size(); ++k)
            hat[k] *= dx_tab[k];
        eng.fft().inverse(hat.data(), out.data());
    };

    auto record_errors = [&](double t) {
        derivative(t_q, qx_truth);
        derivative(o_q, qx_obs);
        run.errors.time.push_back(t);
        run.errors.err_eta.push_back(diff_norm(o_eta, t_eta, spacing));
        run.errors.err_qx.push_back(diff_norm(qx_obs, qx_truth, spacing));
        run.errors.err_q.push_back(diff_norm(o_q, t_q, spacing));
    };
    record_errors(base);

    // Circular buffer of the five most recent truth eta records, slot =
    // truth step mod 5. Assignment reuses capacity; no per-step allocation.
    std::array<long long, 5> ring_step{-1, -1, -1, -1, -1};
    std::array<std::vector<double>, 5> ring_eta;

    struct Pending {
        long long ostep;
        std::vector<double> eta_obs, q_obs, qx_obs;
    };
    std::vector<Pending> pending;

    auto push_truth_record = [&](long long tstep) {
        const size_t slot = static_cast<size_t>(tstep % 5);
        ring_step[slot] = tstep;
        ring_eta[slot] = t_eta;
        // Finalize any pending snapshot whose forward records just arrived.
        for (auto it = pending.begin(); it != pending.end();) {
            if (2 * it->ostep + 2 == tstep) {
                ObserverSnapshot snap{base +
                                          static_cast<double>(2 * it->ostep) * dt,
                                      dt,
                                      {},
                                      Field(grid, it->eta_obs),
                                      Field(grid, it->q_obs),
                                      Field(grid, it->qx_obs)};
                snap.eta_records.reserve(5);
                for (long long s = 2 * it->ostep - 2; s <= 2 * it->ostep + 2;
                     ++s) {
                    const size_t rs = static_cast<size_t>(s % 5);
                    if (ring_step[rs] != s)
                        throw std::logic_error("snapshot ring out of sync");
                    snap.eta_records.emplace_back(grid, ring_eta[rs]);
                }
                run.snapshots.push_back(std::move(snap));
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
    };
    push_truth_record(0);

    size_t next_record = 0;
    const std::vector<double>& zt = zeta_true.zeta().values();
    const std::vector<double>& zg = zeta_guess.zeta().values();
    std::vector<double> eta_m0(n), eta_m1(n);

    for (long long ostep = 1; ostep <= osteps; ++ostep) {
        eta_m0 = t_eta; // eta at the start of the observer step
        truth.step(t_eta, t_q, zt.data(), dt);
        push_truth_record(2 * ostep - 1);
        eta_m1 = t_eta;
        truth.step(t_eta, t_q, zt.data(), dt);
        push_truth_record(2 * ostep);

        obs.step(o_eta, o_q, eta_m0.data(), eta_m1.data(), t_eta.data(),
                 zg.data(), 2.0 * dt);

        const double t_now = base + static_cast<double>(2 * ostep) * dt;
        check_finite_or_throw(t_eta, t_now, "truth state");
        check_finite_or_throw(o_eta, t_now, "observer eta");
        check_finite_or_throw(o_q, t_now, "observer q");
        record_errors(t_now);

        if (next_record < record_osteps.size() &&
            record_osteps[next_record] == ostep) {
            derivative(o_q, qx_obs);
            pending.push_back(Pending{ostep, o_eta, o_q, qx_obs});
            ++next_record;
            // Skip duplicates.
            while (next_record < record_osteps.size() &&
                   record_osteps[next_record] == ostep)
                ++next_record;
        }
    }
    return run;
}

ObserverRun run_observer_replay(const MeasurementStream& stream,
                                const State& obs_initial,
                                const BottomProfile& zeta_guess,
                                const ModelSpec& model,
                                const ObserverParams& params, double dt_obs,
                                double t_end,
                                const std::vector<double>& record_times,
                                bool linearized)
{
    const Grid grid = stream.grid();
    if (!(obs_initial.eta.grid() == grid) || !(zeta_guess.grid() == grid))
        throw std::invalid_argument("run_observer_replay: grid mismatch");
    if (!(dt_obs > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("run_observer_replay: dt_obs, t_end must be positive");

    // dt_obs = 2m * stream spacing for a positive integer m.
    const double ratio = dt_obs / stream.dt();
    const long long two_m = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(two_m)) > 1e-6 || two_m < 2 ||
        two_m % 2 != 0)
        throw std::invalid_argument(
            "run_observer_replay: dt_obs must be an even multiple of the "
            "stream spacing");
    const long long m = two_m / 2;

    const double base = stream.t0();
    const long long osteps =
        step_index(t_end - base, dt_obs, "run_observer_replay t_end");
    if (osteps < 1)
        throw std::invalid_argument("run_observer_replay: t_end too small");
    if (osteps * two_m >= stream.size())
        throw std::invalid_argument(
            "run_observer_replay: stream exhausted before t_end (have " +
            std::to_string(stream.size()) + " records, need " +
            std::to_string(osteps * two_m + 1) + ")");

    std::vector<long long> record_osteps;
    for (double t : record_times) {
        const long long r = step_index(t - base, dt_obs, "record time");
        // Five stencil records at the stream spacing around the record time.
        const long long center = r * two_m;
        if (center - 2 < 0 || center + 2 >= stream.size() || r < 1 ||
            r > osteps)
            throw std::invalid_argument(
                "record time outside the replayable window");
        record_osteps.push_back(r);
    }
    std::sort(record_osteps.begin(), record_osteps.end());

    auto& eng = detail::engine_for(grid, model);
    ObserverStepper obs(eng, params, linearized);

    std::vector<double> o_eta = obs_initial.eta.values();
    std::vector<double> o_q = obs_initial.q.values();

    ObserverRun run{params, dt_obs, {}, {}};
    run.snapshots.reserve(record_osteps.size());

    const size_t n = static_cast<size_t>(grid.size());
    std::vector<double> qx_obs(n);
    std::vector<std::complex<double>> hat(static_cast<size_t>(grid.num_modes()));
    auto derivative = [&](const std::vector<double>& in,
                          std::vector<double>& out) {
        eng.fft().forward(in.data(), hat.data());
        for (int k = 0; k < grid.num_modes(); ++k)
            hat[static_cast<size_t>(k)] *= std::complex<double>(0.0, k);
        hat.back() = 0.0;
        eng.fft().inverse(hat.data(), out.data());
    };

    size_t next_record = 0;
    const std::vector<double>& zg = zeta_guess.zeta().values();
    for (long long ostep = 1; ostep <= osteps; ++ostep) {
        const long long j = (ostep - 1) * two_m;
        obs.step(o_eta, o_q, stream.eta(static_cast<int>(j)).values().data(),
                 stream.eta(static_cast<int>(j + m)).values().data(),
                 stream.eta(static_cast<int>(j + two_m)).values().data(),
                 zg.data(), dt_obs);
        const double t_now = base + static_cast<double>(ostep) * dt_obs;
        check_finite_or_throw(o_eta, t_now, "observer eta");
        check_finite_or_throw(o_q, t_now, "observer q");

        if (next_record < record_osteps.size() &&
            record_osteps[next_record] == ostep) {
            derivative(o_q, qx_obs);
            const long long center = ostep * two_m;
            ObserverSnapshot snap{t_now,
                                  stream.dt(),
                                  {},
                                  Field(grid, o_eta),
                                  Field(grid, o_q),
                                  Field(grid, qx_obs)};
            snap.eta_records.reserve(5);
            for (long long off = -2; off <= 2; ++off)
                snap.eta_records.push_back(
                    stream.eta(static_cast<int>(center + off)));
            run.snapshots.push_back(std::move(snap));
            ++next_record;
            while (next_record < record_osteps.size() &&
                   record_osteps[next_record] == ostep)
                ++next_record;
        }
    }
    return run;
}

} // namespace seabed
