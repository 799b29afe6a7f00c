#pragma once

#include "seabed/spectral.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// The two shallow-water models' right-hand sides, bottom profiles, initial
// conditions, conserved quantities and the RK4 time stepper. Fields are
// nondimensional: eta and zeta scale with the depth h, q_x with sqrt(g h),
// time with L/(2*pi*sqrt(g h)).

namespace seabed {

struct State {
    Field eta;
    Field q;
    double time = 0.0;

    State(Field eta_, Field q_, double time_ = 0.0);
};

// Bottom deviation from z = -1; min(zeta) > -1 (no-island condition).
class BottomProfile {
public:
    explicit BottomProfile(Field zeta);
    const Field& zeta() const { return zeta_; }
    const Grid& grid() const { return zeta_.grid(); }

private:
    Field zeta_;
};

// Thrown when a trajectory leaves the finite range; carries the time.
class BlowupError : public std::runtime_error {
public:
    BlowupError(double time, const std::string& what_field);
    double time() const { return time_; }

private:
    double time_;
};

struct Profile1 {};
struct Profile2 {};
struct ConstantProfile {
    double value;
};
struct CustomProfile {
    std::vector<double> samples;
};
using ProfileKind =
    std::variant<Profile1, Profile2, ConstantProfile, CustomProfile>;

// Samples the requested bottom profile on the grid.
//   Profile 1: zeta = -0.12 sin(3x) cos(2x) sin(10x) + 0.05 sin(4x)
//   Profile 2: three Gaussian depressions centred at 3*pi/4, 1.12*(3*pi/4)
//              and 5*pi/4.
// Rejects any profile with min(zeta) <= -1.
BottomProfile profile(const ProfileKind& kind, const Grid& grid);

// Stokes-type initial data:
//   q(x,0)   = A sin x + (A/5) sin 2x
//   eta(x,0) = A cos x + (A/5) cos 2x - 0.1
State stokes_initial_condition(double amplitude, const Grid& grid);

struct StateRate {
    Field deta;
    Field dq;
};

// eta_t = omega^2 q - P dx[(eta + zeta)(P q_x)],  q_t = -eta - (1/2)(P q_x)^2.
// The two quadratic products are de-aliased. mean(deta) = 0 to round-off.
StateRate swe_rhs(const State& state, const BottomProfile& zeta,
                  const ModelSpec& model);

// Linear part of swe_rhs (quadratic terms dropped, variable-zeta term kept):
//   eta_t = omega^2 q - P dx[zeta (P q_x)],  q_t = -eta.
// Test-only surface backing the observer's linearized mode.
StateRate swe_rhs_linear(const State& state, const BottomProfile& zeta,
                         const ModelSpec& model);

// H = (1/2) Int [ q omega^2 q + (eta + zeta)(P q_x)^2 + eta^2 ] dx
// by the uniform trapezoid rule.
double hamiltonian(const State& state, const BottomProfile& zeta,
                   const ModelSpec& model);

// Classical four-stage RK4 applied to swe_rhs.
State rk4_step(const State& state, const BottomProfile& zeta,
               const ModelSpec& model, double dt);

// Fixed-step RK4 trajectory from `initial` to t_end, recording every
// record_every-th state including the initial one. Aborts with BlowupError
// if the state leaves the finite range.
std::vector<State> simulate(const State& initial, const BottomProfile& zeta,
                            const ModelSpec& model, double dt, double t_end,
                            int record_every);

} // namespace seabed
