#include "seabed/dynamics.hpp"

#include "kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace seabed {

namespace {
constexpr double pi = std::numbers::pi;

void check_shared_grid(const State& state, const BottomProfile& zeta)
{
    if (!(state.eta.grid() == state.q.grid()) ||
        !(state.eta.grid() == zeta.grid()))
        throw std::invalid_argument("state and bottom profile must share one grid");
}

void check_rhs_finite(const Field& deta, const Field& dq, double time)
{
    if (!all_finite(deta))
        throw BlowupError(time, "eta_t");
    if (!all_finite(dq))
        throw BlowupError(time, "q_t");
}
} // namespace

State::State(Field eta_, Field q_, double time_)
    : eta(std::move(eta_)), q(std::move(q_)), time(time_)
{
    if (!(eta.grid() == q.grid()))
        throw std::invalid_argument("State: eta and q must share one grid");
}

BottomProfile::BottomProfile(Field zeta) : zeta_(std::move(zeta))
{
    if (!all_finite(zeta_))
        throw std::invalid_argument("BottomProfile: non-finite samples");
    if (!(min_value(zeta_) > -1.0))
        throw std::invalid_argument(
            "BottomProfile: min(zeta) must exceed -1 (no-island condition)");
}

BlowupError::BlowupError(double time, const std::string& what_field)
    : std::runtime_error("non-finite " + what_field + " at t = " +
                         std::to_string(time)),
      time_(time)
{
}

BottomProfile profile(const ProfileKind& kind, const Grid& grid)
{
    Field zeta(grid);
    if (std::holds_alternative<Profile1>(kind)) {
        for (int i = 0; i < grid.size(); ++i) {
            const double x = grid.point(i);
            zeta[i] = -0.12 * std::sin(3 * x) * std::cos(2 * x) * std::sin(10 * x) +
                      0.05 * std::sin(4 * x);
        }
    } else if (std::holds_alternative<Profile2>(kind)) {
        const double x1 = 3.0 * pi / 4.0;
        const double x2 = 1.12 * x1;
        const double x3 = 5.0 * pi / 4.0;
        for (int i = 0; i < grid.size(); ++i) {
            const double x = grid.point(i);
            zeta[i] = -0.1 * std::exp(-100.0 * (x - x1) * (x - x1)) -
                      0.05 * std::exp(-2.0 * (x - x2) * (x - x2)) -
                      0.2 * std::exp(-100.0 * (x - x3) * (x - x3));
        }
    } else if (const auto* c = std::get_if<ConstantProfile>(&kind)) {
        for (int i = 0; i < grid.size(); ++i)
            zeta[i] = c->value;
    } else {
        const auto& custom = std::get<CustomProfile>(kind);
        if (static_cast<int>(custom.samples.size()) != grid.size())
            throw std::invalid_argument("profile: custom sample count mismatch");
        zeta = Field(grid, custom.samples);
    }
    return BottomProfile(std::move(zeta));
}

State stokes_initial_condition(double amplitude, const Grid& grid)
{
    if (!(amplitude > 0.0))
        throw std::invalid_argument("stokes_initial_condition: amplitude must be positive");
    Field eta(grid), q(grid);
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        q[i] = amplitude * std::sin(x) + amplitude / 5.0 * std::sin(2 * x);
        eta[i] = amplitude * std::cos(x) + amplitude / 5.0 * std::cos(2 * x) - 0.1;
    }
    return State(std::move(eta), std::move(q), 0.0);
}

StateRate swe_rhs(const State& state, const BottomProfile& zeta,
                  const ModelSpec& model)
{
    check_shared_grid(state, zeta);
    auto& eng = detail::engine_for(state.eta.grid(), model);
    StateRate rate{Field(state.eta.grid()), Field(state.eta.grid())};
    eng.swe_rhs(state.eta.values().data(), state.q.values().data(),
                zeta.zeta().values().data(), false, rate.deta.values().data(),
                rate.dq.values().data());
    check_rhs_finite(rate.deta, rate.dq, state.time);
    return rate;
}

StateRate swe_rhs_linear(const State& state, const BottomProfile& zeta,
                         const ModelSpec& model)
{
    check_shared_grid(state, zeta);
    auto& eng = detail::engine_for(state.eta.grid(), model);
    StateRate rate{Field(state.eta.grid()), Field(state.eta.grid())};
    eng.swe_rhs(state.eta.values().data(), state.q.values().data(),
                zeta.zeta().values().data(), true, rate.deta.values().data(),
                rate.dq.values().data());
    check_rhs_finite(rate.deta, rate.dq, state.time);
    return rate;
}

double hamiltonian(const State& state, const BottomProfile& zeta,
                   const ModelSpec& model)
{
    check_shared_grid(state, zeta);
    const Field om2q = apply_multiplier(state.q, omega2_symbol(model));
    const Field pqx = apply_multiplier(state.q, p_dx_symbol(model));
    double h = 0.0;
    h += inner_l2(state.q, om2q);
    const Field depth = state.eta + zeta.zeta();
    h += inner_l2(depth, hadamard(pqx, pqx));
    h += inner_l2(state.eta, state.eta);
    return 0.5 * h;
}

namespace {

// Four-stage stepper over the engine kernels; `linear` selects the
// linearized vector field.
void rk4_step_inplace(detail::Engine& eng, std::vector<double>& eta,
                      std::vector<double>& q, const std::vector<double>& zeta,
                      double dt, bool linear)
{
    const size_t n = eta.size();
    static thread_local std::vector<double> k_eta, k_q, eta_s, q_s, acc_eta,
        acc_q;
    k_eta.resize(n);
    k_q.resize(n);
    eta_s.resize(n);
    q_s.resize(n);
    acc_eta.resize(n);
    acc_q.resize(n);

    // stage 1
    eng.swe_rhs(eta.data(), q.data(), zeta.data(), linear, k_eta.data(),
                k_q.data());
    for (size_t i = 0; i < n; ++i) {
        acc_eta[i] = k_eta[i];
        acc_q[i] = k_q[i];
        eta_s[i] = eta[i] + 0.5 * dt * k_eta[i];
        q_s[i] = q[i] + 0.5 * dt * k_q[i];
    }
    // stage 2
    eng.swe_rhs(eta_s.data(), q_s.data(), zeta.data(), linear, k_eta.data(),
                k_q.data());
    for (size_t i = 0; i < n; ++i) {
        acc_eta[i] += 2.0 * k_eta[i];
        acc_q[i] += 2.0 * k_q[i];
        eta_s[i] = eta[i] + 0.5 * dt * k_eta[i];
        q_s[i] = q[i] + 0.5 * dt * k_q[i];
    }
    // stage 3
    eng.swe_rhs(eta_s.data(), q_s.data(), zeta.data(), linear, k_eta.data(),
                k_q.data());
    for (size_t i = 0; i < n; ++i) {
        acc_eta[i] += 2.0 * k_eta[i];
        acc_q[i] += 2.0 * k_q[i];
        eta_s[i] = eta[i] + dt * k_eta[i];
        q_s[i] = q[i] + dt * k_q[i];
    }
    // stage 4
    eng.swe_rhs(eta_s.data(), q_s.data(), zeta.data(), linear, k_eta.data(),
                k_q.data());
    for (size_t i = 0; i < n; ++i) {
        eta[i] += dt / 6.0 * (acc_eta[i] + k_eta[i]);
        q[i] += dt / 6.0 * (acc_q[i] + k_q[i]);
    }
}

} // namespace

State rk4_step(const State& state, const BottomProfile& zeta,
               const ModelSpec& model, double dt)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("rk4_step: dt must be positive");
    check_shared_grid(state, zeta);
    auto& eng = detail::engine_for(state.eta.grid(), model);
    State next = state;
    rk4_step_inplace(eng, next.eta.values(), next.q.values(),
                     zeta.zeta().values(), dt, false);
    next.time = state.time + dt;
    if (!all_finite(next.eta))
        throw BlowupError(next.time, "eta");
    if (!all_finite(next.q))
        throw BlowupError(next.time, "q");
    return next;
}

std::vector<State> simulate(const State& initial, const BottomProfile& zeta,
                            const ModelSpec& model, double dt, double t_end,
                            int record_every)
{
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("simulate: dt and t_end must be positive");
    if (record_every < 1)
        throw std::invalid_argument("simulate: record_every must be >= 1");
    check_shared_grid(initial, zeta);

    const long long nsteps = std::llround(t_end / dt);
    if (nsteps < 1 || std::abs(nsteps * dt - t_end) > 1e-6 * dt)
        throw std::invalid_argument("simulate: t_end must be a multiple of dt");

    auto& eng = detail::engine_for(initial.eta.grid(), model);
    std::vector<State> recorded;
    recorded.reserve(static_cast<size_t>(nsteps / record_every) + 2);
    recorded.push_back(initial);

    State current = initial;
    for (long long step = 1; step <= nsteps; ++step) {
        rk4_step_inplace(eng, current.eta.values(), current.q.values(),
                         zeta.zeta().values(), dt, false);
        current.time = initial.time + static_cast<double>(step) * dt;
        if (!all_finite(current.eta) || !all_finite(current.q))
            throw BlowupError(current.time, "state");
        if (step % record_every == 0)
            recorded.push_back(current);
    }
    return recorded;
}

} // namespace seabed
