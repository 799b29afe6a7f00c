#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

// Periodic spectral substrate: uniform grid on [0, 2*pi), discrete Fourier
// transforms, Fourier-multiplier application and 2/3-rule de-aliasing.
//
// Transform convention (used everywhere in this library): the forward
// transform of a real grid function f returns the Fourier-series
// coefficients c_k, k = 0..n/2 (real-to-complex half spectrum), normalized so
// that f(x_j) = sum_{k=-n/2}^{n/2-1} c_k exp(i k x_j) with c_{-k} = conj(c_k).
// Under this convention Parseval reads
//     (2*pi/n) * sum_j f_j^2 = 2*pi * sum_{k=-n/2}^{n/2-1} |c_k|^2.
// The Nyquist mode k = n/2 is always dropped by apply_multiplier so that odd
// (ik-type) symbols map real fields to real fields.

namespace seabed {

class Grid {
public:
    explicit Grid(int n_points);

    int size() const { return n_; }
    double spacing() const;
    double point(int i) const;
    std::vector<double> points() const;

    // Number of stored modes in the real-to-complex layout (k = 0..n/2).
    int num_modes() const { return n_ / 2 + 1; }
    int nyquist() const { return n_ / 2; }
    // Largest mode kept by the 2/3 de-aliasing rule (3k <= n).
    int dealias_cutoff() const { return n_ / 3; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int n_;
};

enum class ModelKind {
    RegularisedBoussinesq,
    RegularisedBoussinesqWhitham,
};

// Dispersive shallow-water model selection: the multiplier pair
// (omega^2, P) plus the shallowness parameter mu. The two families are never
// mixed across kinds.
struct ModelSpec {
    ModelKind kind = ModelKind::RegularisedBoussinesq;
    double mu = 1.0;

    static ModelSpec boussinesq(double mu);
    static ModelSpec whitham(double mu);
};

const char* to_string(ModelKind kind);

// omega^2(k): dispersion multiplier. Nonnegative, even in k, zero iff k = 0.
double multiplier_omega2(const ModelSpec& model, int k);

// P(k): regularising multiplier. Strictly positive, even in k, <= 1,
// P(0) = 1 (removable singularity for the Whitham choice).
double multiplier_P(const ModelSpec& model, int k);

// Real grid field tied to one grid.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double& operator[](int i) { return values_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Pointwise helpers.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field hadamard(const Field& a, const Field& b);

double mean(const Field& f);
double max_abs(const Field& f);
double min_value(const Field& f);
bool all_finite(const Field& f);

// L2([0,2*pi]) norm by the uniform trapezoid rule (spectrally exact for
// band-limited integrands): sqrt((2*pi/n) * sum f_i^2).
double norm_l2(const Field& f);
// Same quadrature for inner products and plain integrals.
double inner_l2(const Field& a, const Field& b);
double integral(const Field& f);

// Normalized half spectrum c_k, k = 0..n/2 (see convention above).
std::vector<std::complex<double>> spectrum(const Field& f);
// Inverse of spectrum(): synthesize a real field from a half spectrum.
Field synthesize(const Grid& grid, std::span<const std::complex<double>> coeffs);

// A multiplier symbol evaluated at integer wavenumbers k >= 0. Symbols with
// odd powers of ik must be conjugate-symmetric; with a half-spectrum layout
// that reduces to symbol(0) being real (the imaginary part at k = 0 is
// discarded).
using Symbol = std::function<std::complex<double>(int)>;

// Returns the field whose Fourier coefficients are symbol(k) times the
// input's. The Nyquist mode is always zeroed. Throws std::invalid_argument
// if the symbol is non-finite at any grid wavenumber.
Field apply_multiplier(const Field& f, const Symbol& symbol);

// Zeroes all modes with |k| > n/3 (the 2/3 rule). Idempotent.
Field dealias(const Field& f);

// Ready-made symbols for the model operators.
Symbol omega2_symbol(const ModelSpec& model);          // omega^2(k)
Symbol p_symbol(const ModelSpec& model);               // P(k)
Symbol p_dx_symbol(const ModelSpec& model);            // ik P(k)
Symbol p2_dxx_symbol(const ModelSpec& model);          // -k^2 P(k)^2
Symbol dx_symbol();                                    // ik
// omega^2(k)/(ik) with the k = 0 value set to 0 (omega^2(0) = 0); used to
// reconstruct omega^2 q from q_x without ever needing q itself.
Symbol omega2_over_ik_symbol(const ModelSpec& model);

} // namespace seabed
