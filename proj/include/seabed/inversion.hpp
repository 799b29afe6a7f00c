#pragma once

#include "seabed/dynamics.hpp"
#include "seabed/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

// Bottom-profile recovery: assemble and solve the multi-snapshot
// Euler-Lagrange system
//   sum_j (P q_x^j) P^2 dx^2 ( (P q_x^j) zeta* )
//     = -sum_j (P q_x^j) P dx ( eta_t^j - omega^2 q^j + P dx((P q_x^j) eta^j) )
// for zeta*, together with the operator's eigenspectrum, the objective value
// and the relative error metrics. omega^2 q is reconstructed from q_x via
// the symbol omega^2(k)/(ik), so q itself is never needed.

namespace seabed {

struct Snapshot {
    double t;
    Field eta;
    Field eta_t;
    Field q_x;
};

class SnapshotSeries {
public:
    explicit SnapshotSeries(std::vector<Snapshot> snapshots);

    int count() const { return static_cast<int>(snapshots_.size()); }
    const Snapshot& operator[](int j) const
    {
        return snapshots_[static_cast<size_t>(j)];
    }
    const Grid& grid() const { return snapshots_.front().eta.grid(); }
    const std::vector<Snapshot>& items() const { return snapshots_; }

private:
    std::vector<Snapshot> snapshots_;
};

struct ReconstructionReport {
    BottomProfile zeta_star;
    std::vector<double> eigenvalues; // signed, sorted by descending magnitude
    double objective = 0.0;
    std::optional<double> error_depth;   // E_b (requires truth)
    std::optional<double> error_profile; // E_p (absent when ||zeta_true|| = 0)
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolveOptions {
    // Relative eigenvalue cutoff for an optional truncated pseudoinverse.
    // 0 (the default) inverts the full spectrum, which is the production
    // path; the summation over snapshots is the regularisation.
    double eigenvalue_cutoff = 0.0;
};

// Fourth-order five-point first-derivative stencil in time:
//   (-f(+2) + 8 f(+1) - 8 f(-1) + f(-2)) / (12 delta), pointwise.
Field eta_t_stencil(std::span<const Field> eta_records, double delta);

// Builds a Snapshot from five consecutive trajectory states (uniform step):
// eta and q_x from the centre state, eta_t from the stencil.
Snapshot snapshot_from_states(std::span<const State> window,
                              const ModelSpec& model);

// Picks `count` stencil-capable snapshots uniformly from a trajectory
// recorded at a fixed step.
SnapshotSeries series_from_trajectory(const std::vector<State>& trajectory,
                                      const ModelSpec& model, int count);

// Matrix of sum_j B_j with B_j f = (P q_x^j) P^2 dx^2 ((P q_x^j) f),
// symmetrized as (A + A^T)/2. Negative semidefinite in exact arithmetic.
Eigen::MatrixXd assemble_operator(const SnapshotSeries& series,
                                  const ModelSpec& model);

Eigen::VectorXd assemble_rhs(const SnapshotSeries& series,
                             const ModelSpec& model);

// Dense symmetric eigendecomposition-based solve of A zeta* = b. Reports
// the signed eigenvalues (descending magnitude), the objective at zeta* and,
// when truth is supplied, (E_b, E_p).
ReconstructionReport solve_reconstruction(const SnapshotSeries& series,
                                          const ModelSpec& model,
                                          const BottomProfile* truth = nullptr,
                                          const SolveOptions& options = {});

// |eigenvalue| magnitudes of the assembled operator, sorted descending.
std::vector<double> eigenspectrum(const SnapshotSeries& series,
                                  const ModelSpec& model);

// sum_j Int ( eta_t^j - omega^2 q^j + P dx((eta^j + zeta)(P q_x^j)) )^2 dx.
double objective_value(const BottomProfile& zeta_candidate,
                       const SnapshotSeries& series, const ModelSpec& model);

struct ErrorMetrics {
    double depth;                  // E_b = ||zeta_r - zeta|| / ||1 + zeta||
    std::optional<double> profile; // E_p = ||zeta_r - zeta|| / ||zeta||
};

ErrorMetrics error_metrics(const BottomProfile& zeta_reconstructed,
                           const BottomProfile& zeta_true);

} // namespace seabed
