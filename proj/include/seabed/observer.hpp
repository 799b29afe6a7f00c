#pragma once

#include "seabed/dynamics.hpp"
#include "seabed/spectral.hpp"

#include <optional>
#include <vector>

// Nonlinear observer for the shallow-water models: an auxiliary copy of the
// dynamics nudged by measured surface deviation,
//   eta~_t = omega^2 q~ - P dx[(eta~ + zeta~)(P q~_x)] - lambda (eta~ - eta)
//   q~_t   = -eta~ - (1/2)(P q~_x)^2 - nu (eta~ - eta),
// plus the parameter rule that guarantees a linear decay rate of lambda/2.

namespace seabed {

struct ObserverParams {
    double lambda;
    double nu;

    ObserverParams(double lambda_, double nu_);
    double decay_rate() const { return lambda / 2.0; }
};

// Picks (lambda, nu) for a target decay rate d: lambda = 2d and
//   1 + nu = (1 + margin) * lambda^2 / (4 (omega(1)^2 + zeta_c P(1)^2)),
// the binding wavenumber being k = 1 for both models. margin must be
// strictly positive (the decay-rate condition is a strict inequality);
// zeta_c is the constant lower bound min[0, zeta].
ObserverParams params_for_decay(double d, double zeta_c,
                                const ModelSpec& model, double margin);

// Observer vector field driven by a measured eta. `linearized` drops the
// quadratic terms (test-only; matches swe_rhs_linear plus nudging).
StateRate observer_rhs(const State& obs, const Field& eta_measured,
                       const BottomProfile& zeta_guess, const ModelSpec& model,
                       const ObserverParams& params, bool linearized = false);

// Uniformly spaced eta measurements driving a replayed observer.
class MeasurementStream {
public:
    MeasurementStream(double t0, double dt, std::vector<Field> eta);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    int size() const { return static_cast<int>(eta_.size()); }
    double time(int j) const { return t0_ + j * dt_; }
    double t_end() const { return time(size() - 1); }
    const Field& eta(int j) const { return eta_[static_cast<size_t>(j)]; }
    const Grid& grid() const { return eta_.front().grid(); }

private:
    double t0_;
    double dt_;
    std::vector<Field> eta_;
};

// One harvested record: observer state at time t plus the five measured eta
// records (t - 2*spacing .. t + 2*spacing) needed by the eta_t stencil.
struct ObserverSnapshot {
    double t;
    double record_spacing;
    std::vector<Field> eta_records; // five measured eta fields
    Field eta_obs;
    Field q_obs;
    Field qx_obs; // dx q~ (P not applied)
};

struct ObserverErrorHistory {
    std::vector<double> time;
    std::vector<double> err_eta; // ||eta~ - eta||_2
    std::vector<double> err_qx;  // ||q~_x - q_x||_2
    std::vector<double> err_q;   // ||q~ - q||_2
};

struct ObserverRun {
    ObserverParams params;
    double dt_observer;
    ObserverErrorHistory errors; // empty for replay runs (no truth available)
    std::vector<ObserverSnapshot> snapshots;

    double predicted_error(double t) const; // exp(-lambda t / 2)
};

// Advances the truth with RK4 at dt and the observer with RK4 at 2 dt,
// feeding the truth's eta to the observer stages at t, t + dt, t + 2 dt.
// record_times must lie on the observer lattice, at least 2 dt from either
// end. `linearized` runs both systems without quadratic terms (test-only).
ObserverRun run_observer_coupled(const State& truth_initial,
                                 const State& obs_initial,
                                 const BottomProfile& zeta_true,
                                 const BottomProfile& zeta_guess,
                                 const ModelSpec& model,
                                 const ObserverParams& params, double dt,
                                 double t_end,
                                 const std::vector<double>& record_times,
                                 bool linearized = false);

// Same journey with eta drawn from a stored stream; the observer step must
// be an even multiple of the stream spacing (dt_obs = 2m * dt_meas). Error
// histories are omitted: no truth is available.
ObserverRun run_observer_replay(const MeasurementStream& stream,
                                const State& obs_initial,
                                const BottomProfile& zeta_guess,
                                const ModelSpec& model,
                                const ObserverParams& params, double dt_obs,
                                double t_end,
                                const std::vector<double>& record_times,
                                bool linearized = false);

} // namespace seabed
