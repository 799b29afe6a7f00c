#pragma once

#include "seabed/spectral.hpp"

#include <complex>
#include <vector>

#include <fftw3.h>

// Internal transform engine shared by the dynamics, observer and inversion
// hot paths. One Engine per (grid size, model); instances are cached
// thread-locally and are not safe to share across threads.

namespace seabed::detail {

class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    // Forward: real n -> complex n/2+1, scaled by 1/n (series coefficients).
    void forward(const double* in, std::complex<double>* out) const;
    // Inverse: complex n/2+1 -> real n (input preserved).
    void inverse(const std::complex<double>* in, double* out) const;

private:
    int n_;
    double* real_buf_;
    fftw_complex* cplx_buf_;
    fftw_plan fwd_plan_;
    fftw_plan inv_plan_;
};

struct SymbolTables {
    std::vector<double> omega2;                     // omega^2(k)
    std::vector<double> p;                          // P(k)
    std::vector<std::complex<double>> p_dx;         // ik P(k)
    std::vector<std::complex<double>> omega2_over_ik;
    int keep_max; // dealias cutoff (3k <= n)
};

class Engine {
public:
    Engine(Grid grid, ModelSpec model);

    const Grid& grid() const { return grid_; }
    const ModelSpec& model() const { return model_; }
    const SymbolTables& tables() const { return tab_; }
    const Fft& fft() const { return fft_; }

    // Right-hand side of the shallow-water model:
    //   deta = omega^2 q - P dx[(eta + zeta) (P q_x)]
    //   dq   = -eta - (1/2)(P q_x)^2
    // with both quadratic products de-aliased. `linear` drops the quadratic
    // terms and keeps the variable-coefficient zeta product.
    void swe_rhs(const double* eta, const double* q, const double* zeta,
                 bool linear, double* deta, double* dq);

    // Observer right-hand side: swe_rhs in the observer variables with the
    // guessed bottom plus the nudging terms -lambda(eta_o - eta_m) and
    // -nu(eta_o - eta_m).
    void observer_rhs(const double* eta_o, const double* q_o,
                      const double* eta_m, const double* zeta, double lambda,
                      double nu, bool linear, double* deta, double* dq);

private:
    // hat2 := table .* fft(in); out := ifft(hat2). Nyquist dropped via table.
    void apply(const std::vector<std::complex<double>>& table,
               const double* in, double* out);
    void apply(const std::vector<double>& table, const double* in,
               double* out);
    // In-place 2/3 truncation of a grid product.
    void dealias(double* inout);

    Grid grid_;
    ModelSpec model_;
    Fft fft_;
    SymbolTables tab_;
    std::vector<std::complex<double>> hat1_, hat2_;
    std::vector<double> pqx_, prod_, work_;
};

// Thread-local engine cache keyed by (n, kind, mu).
Engine& engine_for(const Grid& grid, const ModelSpec& model);

} // namespace seabed::detail
