#pragma once

#include "seabed/dynamics.hpp"
#include "seabed/spectral.hpp"

#include <span>
#include <utility>
#include <vector>

// Energy functionals for the linearized observer error system, conserved
// quantity monitors and the decay-rate fitting utilities used by the
// acceptance suite.

namespace seabed {

// E = (1/2) [ Int (eta_t^e)^2
//           + (1+nu) Int ( eta^e omega^2 eta^e + zeta (P eta_x^e)^2 ) ].
// Positive whenever 1 + zeta > 0 and eta^e is non-constant.
double linear_error_energy(const Field& eta_err, const Field& eta_err_t,
                           const BottomProfile& zeta, double nu,
                           const ModelSpec& model);

// Lower-bound constant of the potential-energy inequality on zero-mean
// fields: C1(mu) = mu^2 (2/3 + mu^2/12)/(1 + mu^2/2)^2 for the regularised
// Boussinesq model, C2(mu) = 1 - tanh(mu)/mu for the Whitham variant.
double energy_lower_bound_constant(const ModelSpec& model);

// Int ( f omega^2 f - (P f_x)^2 ) dx, the quadratic form the lower bound
// controls.
double potential_quadratic_form(const Field& f, const ModelSpec& model);

// Weighted seminorm sum_{k != 0} k tanh(mu k) |f_k|^2 appearing in the
// Whitham-side lower bound.
double weighted_h_half_seminorm(const Field& f, double mu);

struct ConservedSeries {
    std::vector<double> time;
    std::vector<double> hamiltonian;
    std::vector<double> mean_eta;
};

ConservedSeries conserved_monitors(const std::vector<State>& trajectory,
                                   const BottomProfile& zeta,
                                   const ModelSpec& model);

struct EnergyReport {
    std::vector<double> time;        // interior record times
    std::vector<double> energy;      // E(t)
    std::vector<double> dissipation; // -lambda Int (eta_t^e)^2
    double lower_bound_constant;
};

// Energy series along a recorded linear-observer error trajectory; eta_t^e
// comes from centred differences on the records, so endpoints are dropped.
EnergyReport observer_error_energy_report(std::span<const double> times,
                                          std::span<const Field> eta_err,
                                          const BottomProfile& zeta,
                                          double lambda, double nu,
                                          const ModelSpec& model);

// Least-squares slope of log(value) against time on [t_lo, t_hi], negated
// so decaying series report a positive rate. Requires at least 5 samples in
// the window and positive values.
double fit_decay_rate(std::span<const double> times,
                      std::span<const double> values, double t_lo,
                      double t_hi);

// Plateau level = median of the final 5% of samples.
double plateau_level(std::span<const double> values);

// Pre-saturation fitting window [0.1 T*, 0.9 T*], where T* is the first
// time the series drops below 3x its final plateau.
std::pair<double, double> presaturation_window(std::span<const double> times,
                                               std::span<const double> values);

} // namespace seabed
