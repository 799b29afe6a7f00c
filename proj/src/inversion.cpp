#include "seabed/inversion.hpp"

#include "kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seabed {

namespace {

// Dense matrix of a real even multiplier built by applying it to the
// canonical basis fields through the transforms (column by column).
Eigen::MatrixXd multiplier_matrix(const Grid& grid,
                                  const std::vector<double>& table,
                                  detail::Engine& eng)
{
    const int n = grid.size();
    Eigen::MatrixXd mat(n, n);
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    std::vector<double> col(static_cast<size_t>(n));
    std::vector<std::complex<double>> hat(static_cast<size_t>(grid.num_modes()));
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        eng.fft().forward(e.data(), hat.data());
        for (int k = 0; k < grid.num_modes(); ++k)
            hat[static_cast<size_t>(k)] *= table[static_cast<size_t>(k)];
        eng.fft().inverse(hat.data(), col.data());
        for (int i = 0; i < n; ++i)
            mat(i, j) = col[static_cast<size_t>(i)];
        e[static_cast<size_t>(j)] = 0.0;
    }
    return mat;
}

std::vector<double> p2_dxx_table(const Grid& grid, const ModelSpec& model)
{
    std::vector<double> t(static_cast<size_t>(grid.num_modes()));
    for (int k = 0; k < grid.num_modes(); ++k) {
        const double p = multiplier_P(model, k);
        t[static_cast<size_t>(k)] = -static_cast<double>(k) * k * p * p;
    }
    t.back() = 0.0; // Nyquist policy
    return t;
}

void check_series_grid(const SnapshotSeries& series)
{
    if (series.count() < 1)
        throw std::invalid_argument("SnapshotSeries: at least one snapshot required");
}

} // namespace

SnapshotSeries::SnapshotSeries(std::vector<Snapshot> snapshots)
    : snapshots_(std::move(snapshots))
{
    if (snapshots_.empty())
        throw std::invalid_argument("SnapshotSeries: empty");
    const Grid& g = snapshots_.front().eta.grid();
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& s : snapshots_) {
        if (!(s.eta.grid() == g) || !(s.eta_t.grid() == g) ||
            !(s.q_x.grid() == g))
            throw std::invalid_argument("SnapshotSeries: mixed grids");
        if (!(s.t > prev))
            throw std::invalid_argument("SnapshotSeries: times must strictly increase");
        prev = s.t;
        // eta_t carries zero mean to round-off (exact-derivative structure of
        // the model); guard against grossly inconsistent user data.
        if (std::abs(mean(s.eta_t)) > 1e-8 * std::max(1.0, max_abs(s.eta_t)))
            throw std::invalid_argument(
                "SnapshotSeries: eta_t must have (near) zero mean");
    }
}

Field eta_t_stencil(std::span<const Field> eta_records, double delta)
{
    if (eta_records.size() != 5)
        throw std::invalid_argument("eta_t_stencil: exactly five records required");
    if (!(delta > 0.0))
        throw std::invalid_argument("eta_t_stencil: delta must be positive");
    const Grid& g = eta_records[0].grid();
    for (const Field& f : eta_records)
        if (!(f.grid() == g))
            throw std::invalid_argument("eta_t_stencil: mismatched grids");
    Field out(g);
    const double scale = 1.0 / (12.0 * delta);
    for (int i = 0; i < g.size(); ++i)
        out[i] = scale * (-eta_records[4][i] + 8.0 * eta_records[3][i] -
                          8.0 * eta_records[1][i] + eta_records[0][i]);
    return out;
}

Snapshot snapshot_from_states(std::span<const State> window,
                              const ModelSpec& model)
{
    if (window.size() != 5)
        throw std::invalid_argument("snapshot_from_states: five states required");
    const double delta = window[1].time - window[0].time;
    for (size_t i = 1; i < 5; ++i)
        if (std::abs(window[i].time - window[i - 1].time - delta) > 1e-9 * std::max(1.0, std::abs(delta)))
            throw std::invalid_argument("snapshot_from_states: non-uniform spacing");
    (void)model;
    std::vector<Field> etas;
    etas.reserve(5);
    for (const State& s : window)
        etas.push_back(s.eta);
    const State& centre = window[2];
    return Snapshot{centre.time, centre.eta, eta_t_stencil(etas, delta),
                    apply_multiplier(centre.q, dx_symbol())};
}

SnapshotSeries series_from_trajectory(const std::vector<State>& trajectory,
                                      const ModelSpec& model, int count)
{
    if (static_cast<int>(trajectory.size()) < 5)
        throw std::invalid_argument("series_from_trajectory: need at least five states");
    if (count < 1)
        throw std::invalid_argument("series_from_trajectory: count must be >= 1");
    const int first = 2;
    const int last = static_cast<int>(trajectory.size()) - 3;
    if (last - first + 1 < count)
        throw std::invalid_argument(
            "series_from_trajectory: trajectory too short for requested count");
    std::vector<Snapshot> snaps;
    snaps.reserve(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        const int centre =
            count == 1 ? first
                       : first + static_cast<int>(std::llround(
                                     static_cast<double>(j) * (last - first) /
                                     (count - 1)));
        snaps.push_back(snapshot_from_states(
            std::span<const State>(trajectory.data() + centre - 2, 5), model));
    }
    return SnapshotSeries(std::move(snaps));
}

Eigen::MatrixXd assemble_operator(const SnapshotSeries& series,
                                  const ModelSpec& model)
{
    check_series_grid(series);
    const Grid& grid = series.grid();
    const int n = grid.size();
    auto& eng = detail::engine_for(grid, model);

    // K = matrix of P^2 dx^2, computed once pseudospectrally; each snapshot
    // contributes D_j K D_j with D_j = diag(P q_x^j).
    const Eigen::MatrixXd K =
        multiplier_matrix(grid, p2_dxx_table(grid, model), eng);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < series.count(); ++j) {
        const Field pqx = apply_multiplier(series[j].q_x, p_symbol(model));
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i)
            d(i) = pqx[i];
        A.noalias() += d.asDiagonal() * K * d.asDiagonal();
    }
    // Kill the round-off asymmetry of column-wise assembly.
    Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
    return sym;
}

Eigen::VectorXd assemble_rhs(const SnapshotSeries& series,
                             const ModelSpec& model)
{
    check_series_grid(series);
    const Grid& grid = series.grid();
    const int n = grid.size();

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < series.count(); ++j) {
        const Snapshot& s = series[j];
        const Field pqx = apply_multiplier(s.q_x, p_symbol(model));
        const Field om2q = apply_multiplier(s.q_x, omega2_over_ik_symbol(model));
        const Field inner =
            s.eta_t - om2q +
            apply_multiplier(hadamard(pqx, s.eta), p_dx_symbol(model));
        const Field outer = apply_multiplier(inner, p_dx_symbol(model));
        for (int i = 0; i < n; ++i)
            rhs(i) -= pqx[i] * outer[i];
    }
    return rhs;
}

namespace {

ReconstructionReport build_report(const SnapshotSeries& series,
                                  const ModelSpec& model,
                                  const BottomProfile* truth,
                                  const SolveOptions& options)
{
    const Grid& grid = series.grid();
    const int n = grid.size();

    const Eigen::MatrixXd A = assemble_operator(series, model);
    const Eigen::VectorXd b = assemble_rhs(series, model);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    if (eig.info() != Eigen::Success)
        throw SolverError("solve_reconstruction: eigendecomposition failed");

    const Eigen::VectorXd& lam = eig.eigenvalues();
    const double lam_max = lam.cwiseAbs().maxCoeff();
    if (lam_max == 0.0)
        throw SolverError(
            "solve_reconstruction: operator is identically zero (all q_x "
            "vanish); provide non-trivial velocity data");

    const double cutoff = options.eigenvalue_cutoff * lam_max;
    Eigen::VectorXd projected = eig.eigenvectors().transpose() * b;
    for (int i = 0; i < n; ++i) {
        if (std::abs(lam(i)) > cutoff && lam(i) != 0.0) {
            projected(i) /= lam(i);
        } else if (options.eigenvalue_cutoff > 0.0) {
            projected(i) = 0.0; // truncated pseudoinverse branch
        } else {
            throw SolverError(
                "solve_reconstruction: operator singular to working "
                "precision; use more snapshots (larger M) or a different "
                "data window");
        }
    }
    Eigen::VectorXd zeta_vec = eig.eigenvectors() * projected;
    if (!zeta_vec.allFinite())
        throw SolverError(
            "solve_reconstruction: solution not finite; the system is too "
            "ill-conditioned — use more snapshots (larger M) or a different "
            "data window");

    std::vector<double> zeta_values(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        zeta_values[static_cast<size_t>(i)] = zeta_vec(i);

    // Signed eigenvalues sorted by descending magnitude.
    std::vector<double> eigenvalues(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        eigenvalues[static_cast<size_t>(i)] = lam(i);
    std::sort(eigenvalues.begin(), eigenvalues.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });

    BottomProfile zeta_star{Field(grid, std::move(zeta_values))};
    ReconstructionReport report{zeta_star,
                                std::move(eigenvalues),
                                objective_value(zeta_star, series, model),
                                std::nullopt,
                                std::nullopt};
    if (truth) {
        const ErrorMetrics err = error_metrics(zeta_star, *truth);
        report.error_depth = err.depth;
        report.error_profile = err.profile;
    }
    return report;
}

} // namespace

ReconstructionReport solve_reconstruction(const SnapshotSeries& series,
                                          const ModelSpec& model,
                                          const BottomProfile* truth,
                                          const SolveOptions& options)
{
    return build_report(series, model, truth, options);
}

std::vector<double> eigenspectrum(const SnapshotSeries& series,
                                  const ModelSpec& model)
{
    const Eigen::MatrixXd A = assemble_operator(series, model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    if (eig.info() != Eigen::Success)
        throw SolverError("eigenspectrum: eigendecomposition failed");
    std::vector<double> magnitudes(static_cast<size_t>(A.rows()));
    for (int i = 0; i < A.rows(); ++i)
        magnitudes[static_cast<size_t>(i)] = std::abs(eig.eigenvalues()(i));
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
    return magnitudes;
}

double objective_value(const BottomProfile& zeta_candidate,
                       const SnapshotSeries& series, const ModelSpec& model)
{
    check_series_grid(series);
    if (!(zeta_candidate.grid() == series.grid()))
        throw std::invalid_argument("objective_value: grid mismatch");
    double total = 0.0;
    for (int j = 0; j < series.count(); ++j) {
        const Snapshot& s = series[j];
        const Field pqx = apply_multiplier(s.q_x, p_symbol(model));
        const Field om2q = apply_multiplier(s.q_x, omega2_over_ik_symbol(model));
        const Field residual =
            s.eta_t - om2q +
            apply_multiplier(hadamard(s.eta + zeta_candidate.zeta(), pqx),
                             p_dx_symbol(model));
        total += inner_l2(residual, residual);
    }
    return total;
}

ErrorMetrics error_metrics(const BottomProfile& zeta_reconstructed,
                           const BottomProfile& zeta_true)
{
    if (!(zeta_reconstructed.grid() == zeta_true.grid()))
        throw std::invalid_argument("error_metrics: grid mismatch");
    const Grid& g = zeta_true.grid();
    Field diff = zeta_reconstructed.zeta() - zeta_true.zeta();
    Field depth_true(g);
    for (int i = 0; i < g.size(); ++i)
        depth_true[i] = 1.0 + zeta_true.zeta()[i];
    const double num = norm_l2(diff);
    ErrorMetrics metrics{num / norm_l2(depth_true), std::nullopt};
    const double norm_true = norm_l2(zeta_true.zeta());
    if (norm_true > 0.0)
        metrics.profile = num / norm_true;
    return metrics;
}

} // namespace seabed
