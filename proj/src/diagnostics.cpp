#include "seabed/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seabed {

double linear_error_energy(const Field& eta_err, const Field& eta_err_t,
                           const BottomProfile& zeta, double nu,
                           const ModelSpec& model)
{
    if (!(eta_err.grid() == eta_err_t.grid()) ||
        !(eta_err.grid() == zeta.grid()))
        throw std::invalid_argument("linear_error_energy: grid mismatch");
    const Field om2_eta = apply_multiplier(eta_err, omega2_symbol(model));
    const Field p_etax = apply_multiplier(eta_err, p_dx_symbol(model));
    double e = inner_l2(eta_err_t, eta_err_t);
    e += (1.0 + nu) * (inner_l2(eta_err, om2_eta) +
                       inner_l2(zeta.zeta(), hadamard(p_etax, p_etax)));
    return 0.5 * e;
}

double energy_lower_bound_constant(const ModelSpec& model)
{
    const double mu = model.mu;
    switch (model.kind) {
    case ModelKind::RegularisedBoussinesq:
        return mu * mu * (2.0 / 3.0 + mu * mu / 12.0) /
               ((1.0 + mu * mu / 2.0) * (1.0 + mu * mu / 2.0));
    case ModelKind::RegularisedBoussinesqWhitham:
        return 1.0 - std::tanh(mu) / mu;
    }
    return 0.0;
}

double potential_quadratic_form(const Field& f, const ModelSpec& model)
{
    const Field om2f = apply_multiplier(f, omega2_symbol(model));
    const Field pfx = apply_multiplier(f, p_dx_symbol(model));
    return inner_l2(f, om2f) - inner_l2(pfx, pfx);
}

double weighted_h_half_seminorm(const Field& f, double mu)
{
    const auto coeffs = spectrum(f);
    double s = 0.0;
    // Contributions of +k and -k are equal; Nyquist excluded by policy.
    for (int k = 1; k < f.grid().nyquist(); ++k)
        s += 2.0 * k * std::tanh(mu * k) *
             std::norm(coeffs[static_cast<size_t>(k)]);
    return 2.0 * std::numbers::pi * s;
}

ConservedSeries conserved_monitors(const std::vector<State>& trajectory,
                                   const BottomProfile& zeta,
                                   const ModelSpec& model)
{
    ConservedSeries out;
    out.time.reserve(trajectory.size());
    out.hamiltonian.reserve(trajectory.size());
    out.mean_eta.reserve(trajectory.size());
    for (const State& s : trajectory) {
        out.time.push_back(s.time);
        out.hamiltonian.push_back(hamiltonian(s, zeta, model));
        out.mean_eta.push_back(mean(s.eta));
    }
    return out;
}

EnergyReport observer_error_energy_report(std::span<const double> times,
                                          std::span<const Field> eta_err,
                                          const BottomProfile& zeta,
                                          double lambda, double nu,
                                          const ModelSpec& model)
{
    if (times.size() != eta_err.size())
        throw std::invalid_argument(
            "observer_error_energy_report: times/records length mismatch");
    if (times.size() < 3)
        throw std::invalid_argument(
            "observer_error_energy_report: need at least three records");

    EnergyReport report;
    report.lower_bound_constant = energy_lower_bound_constant(model);
    const size_t count = times.size();
    report.time.reserve(count - 2);
    report.energy.reserve(count - 2);
    report.dissipation.reserve(count - 2);
    for (size_t i = 1; i + 1 < count; ++i) {
        const double h_fwd = times[i + 1] - times[i];
        const double h_bwd = times[i] - times[i - 1];
        if (!(h_fwd > 0.0) || std::abs(h_fwd - h_bwd) > 1e-9 * h_fwd)
            throw std::invalid_argument(
                "observer_error_energy_report: records must be uniform in time");
        Field eta_t = (1.0 / (2.0 * h_fwd)) * (eta_err[i + 1] - eta_err[i - 1]);
        report.time.push_back(times[i]);
        report.energy.push_back(
            linear_error_energy(eta_err[i], eta_t, zeta, nu, model));
        report.dissipation.push_back(-lambda * inner_l2(eta_t, eta_t));
    }
    return report;
}

double fit_decay_rate(std::span<const double> times,
                      std::span<const double> values, double t_lo, double t_hi)
{
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay_rate: length mismatch");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    int count = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi)
            continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument(
                "fit_decay_rate: values must be positive on the window");
        const double y = std::log(values[i]);
        st += times[i];
        sy += y;
        stt += times[i] * times[i];
        sty += times[i] * y;
        ++count;
    }
    if (count < 5)
        throw std::invalid_argument(
            "fit_decay_rate: fewer than 5 samples in the window");
    const double denom = count * stt - st * st;
    if (denom == 0.0)
        throw std::invalid_argument("fit_decay_rate: degenerate window");
    const double slope = (count * sty - st * sy) / denom;
    return -slope;
}

double plateau_level(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("plateau_level: empty series");
    const size_t tail = std::max<size_t>(1, values.size() / 20);
    std::vector<double> last(values.end() - static_cast<long>(tail),
                             values.end());
    std::sort(last.begin(), last.end());
    const size_t mid = last.size() / 2;
    if (last.size() % 2 == 1)
        return last[mid];
    return 0.5 * (last[mid - 1] + last[mid]);
}

std::pair<double, double> presaturation_window(std::span<const double> times,
                                               std::span<const double> values)
{
    if (times.size() != values.size() || times.empty())
        throw std::invalid_argument("presaturation_window: bad series");
    const double plateau = plateau_level(values);
    double t_star = times.back();
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 3.0 * plateau) {
            t_star = times[i];
            break;
        }
    }
    return {0.1 * t_star, 0.9 * t_star};
}

} // namespace seabed
