#include "seabed/spectral.hpp"

#include "kernels.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace seabed {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// FFTW's planner is not thread-safe; executions are.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

Grid::Grid(int n_points) : n_(n_points)
{
    if (n_points < 8 || n_points % 2 != 0)
        throw std::invalid_argument("Grid: n_points must be even and >= 8, got " +
                                    std::to_string(n_points));
}

double Grid::spacing() const { return two_pi / n_; }

double Grid::point(int i) const { return two_pi * i / n_; }

std::vector<double> Grid::points() const
{
    std::vector<double> x(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i)
        x[static_cast<size_t>(i)] = point(i);
    return x;
}

ModelSpec ModelSpec::boussinesq(double mu)
{
    if (!(mu > 0.0))
        throw std::invalid_argument("ModelSpec: mu must be positive");
    return {ModelKind::RegularisedBoussinesq, mu};
}

ModelSpec ModelSpec::whitham(double mu)
{
    if (!(mu > 0.0))
        throw std::invalid_argument("ModelSpec: mu must be positive");
    return {ModelKind::RegularisedBoussinesqWhitham, mu};
}

const char* to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::RegularisedBoussinesq: return "regularised-boussinesq";
    case ModelKind::RegularisedBoussinesqWhitham:
        return "regularised-boussinesq-whitham";
    }
    return "unknown";
}

double multiplier_omega2(const ModelSpec& model, int k)
{
    const double mk = model.mu * k;
    switch (model.kind) {
    case ModelKind::RegularisedBoussinesq:
        return k * k * (1.0 + mk * mk / 6.0) / (1.0 + mk * mk / 2.0);
    case ModelKind::RegularisedBoussinesqWhitham:
        return k * std::tanh(mk) / model.mu;
    }
    return 0.0;
}

double multiplier_P(const ModelSpec& model, int k)
{
    const double mk = model.mu * k;
    switch (model.kind) {
    case ModelKind::RegularisedBoussinesq:
        return 1.0 / (1.0 + mk * mk / 2.0);
    case ModelKind::RegularisedBoussinesqWhitham:
        return k == 0 ? 1.0 : std::tanh(mk) / mk;
    }
    return 0.0;
}

Field::Field(Grid grid)
    : grid_(grid), values_(static_cast<size_t>(grid.size()), 0.0)
{
}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != grid_.size())
        throw std::invalid_argument("Field: value count does not match grid size");
}

Field operator+(const Field& a, const Field& b)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("Field: grid mismatch");
    Field out = a;
    for (int i = 0; i < out.size(); ++i)
        out[i] += b[i];
    return out;
}

Field operator-(const Field& a, const Field& b)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("Field: grid mismatch");
    Field out = a;
    for (int i = 0; i < out.size(); ++i)
        out[i] -= b[i];
    return out;
}

Field operator*(double s, const Field& a)
{
    Field out = a;
    for (int i = 0; i < out.size(); ++i)
        out[i] *= s;
    return out;
}

Field hadamard(const Field& a, const Field& b)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("Field: grid mismatch");
    Field out = a;
    for (int i = 0; i < out.size(); ++i)
        out[i] *= b[i];
    return out;
}

double mean(const Field& f)
{
    double s = 0.0;
    for (double v : f.values())
        s += v;
    return s / f.size();
}

double max_abs(const Field& f)
{
    double m = 0.0;
    for (double v : f.values())
        m = std::max(m, std::abs(v));
    return m;
}

double min_value(const Field& f)
{
    double m = f.values().empty() ? 0.0 : f[0];
    for (double v : f.values())
        m = std::min(m, v);
    return m;
}

bool all_finite(const Field& f)
{
    for (double v : f.values())
        if (!std::isfinite(v))
            return false;
    return true;
}

double norm_l2(const Field& f)
{
    double s = 0.0;
    for (double v : f.values())
        s += v * v;
    return std::sqrt(s * f.grid().spacing());
}

double inner_l2(const Field& a, const Field& b)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("inner_l2: grid mismatch");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s * a.grid().spacing();
}

double integral(const Field& f)
{
    double s = 0.0;
    for (double v : f.values())
        s += v;
    return s * f.grid().spacing();
}

std::vector<std::complex<double>> spectrum(const Field& f)
{
    const auto& eng = detail::engine_for(f.grid(), ModelSpec{});
    std::vector<std::complex<double>> out(
        static_cast<size_t>(f.grid().num_modes()));
    eng.fft().forward(f.values().data(), out.data());
    return out;
}

Field synthesize(const Grid& grid, std::span<const std::complex<double>> coeffs)
{
    if (static_cast<int>(coeffs.size()) != grid.num_modes())
        throw std::invalid_argument("synthesize: expected n/2+1 coefficients");
    const auto& eng = detail::engine_for(grid, ModelSpec{});
    Field out(grid);
    eng.fft().inverse(coeffs.data(), out.values().data());
    return out;
}

Field apply_multiplier(const Field& f, const Symbol& symbol)
{
    const Grid& g = f.grid();
    const int nm = g.num_modes();
    std::vector<std::complex<double>> table(static_cast<size_t>(nm));
    for (int k = 0; k < nm; ++k) {
        std::complex<double> s = symbol(k);
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument(
                "apply_multiplier: symbol is non-finite at k = " +
                std::to_string(k));
        table[static_cast<size_t>(k)] = s;
    }
    table[0] = table[0].real();      // conjugate symmetry at k = 0
    table[static_cast<size_t>(nm - 1)] = 0.0; // Nyquist policy

    const auto& eng = detail::engine_for(g, ModelSpec{});
    std::vector<std::complex<double>> hat(static_cast<size_t>(nm));
    eng.fft().forward(f.values().data(), hat.data());
    for (int k = 0; k < nm; ++k)
        hat[static_cast<size_t>(k)] *= table[static_cast<size_t>(k)];
    Field out(g);
    eng.fft().inverse(hat.data(), out.values().data());
    return out;
}

Field dealias(const Field& f)
{
    const Grid& g = f.grid();
    const auto& eng = detail::engine_for(g, ModelSpec{});
    std::vector<std::complex<double>> hat(static_cast<size_t>(g.num_modes()));
    eng.fft().forward(f.values().data(), hat.data());
    for (int k = g.dealias_cutoff() + 1; k < g.num_modes(); ++k)
        hat[static_cast<size_t>(k)] = 0.0;
    Field out(g);
    eng.fft().inverse(hat.data(), out.values().data());
    return out;
}

Symbol omega2_symbol(const ModelSpec& model)
{
    return [model](int k) { return std::complex<double>(multiplier_omega2(model, k), 0.0); };
}

Symbol p_symbol(const ModelSpec& model)
{
    return [model](int k) { return std::complex<double>(multiplier_P(model, k), 0.0); };
}

Symbol p_dx_symbol(const ModelSpec& model)
{
    return [model](int k) {
        return std::complex<double>(0.0, k * multiplier_P(model, k));
    };
}

Symbol p2_dxx_symbol(const ModelSpec& model)
{
    return [model](int k) {
        const double p = multiplier_P(model, k);
        return std::complex<double>(-static_cast<double>(k) * k * p * p, 0.0);
    };
}

Symbol dx_symbol()
{
    return [](int k) { return std::complex<double>(0.0, k); };
}

Symbol omega2_over_ik_symbol(const ModelSpec& model)
{
    return [model](int k) {
        if (k == 0)
            return std::complex<double>(0.0, 0.0);
        // omega^2(k)/(ik) = -i omega^2(k)/k
        return std::complex<double>(0.0, -multiplier_omega2(model, k) / k);
    };
}

namespace detail {

Fft::Fft(int n) : n_(n)
{
    real_buf_ = fftw_alloc_real(static_cast<size_t>(n));
    cplx_buf_ = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic run to run.
    fwd_plan_ = fftw_plan_dft_r2c_1d(n, real_buf_, cplx_buf_, FFTW_ESTIMATE);
    inv_plan_ = fftw_plan_dft_c2r_1d(n, cplx_buf_, real_buf_, FFTW_ESTIMATE);
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_plan_);
    fftw_destroy_plan(inv_plan_);
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void Fft::forward(const double* in, std::complex<double>* out) const
{
    std::memcpy(real_buf_, in, sizeof(double) * static_cast<size_t>(n_));
    fftw_execute(fwd_plan_);
    const double scale = 1.0 / n_;
    for (int k = 0; k <= n_ / 2; ++k)
        out[k] = std::complex<double>(cplx_buf_[k][0], cplx_buf_[k][1]) * scale;
}

void Fft::inverse(const std::complex<double>* in, double* out) const
{
    // c2r destroys its input, so stage through the owned buffer.
    for (int k = 0; k <= n_ / 2; ++k) {
        cplx_buf_[k][0] = in[k].real();
        cplx_buf_[k][1] = in[k].imag();
    }
    fftw_execute(inv_plan_);
    std::memcpy(out, real_buf_, sizeof(double) * static_cast<size_t>(n_));
}

Engine::Engine(Grid grid, ModelSpec model)
    : grid_(grid), model_(model), fft_(grid.size())
{
    const int nm = grid.num_modes();
    tab_.omega2.resize(static_cast<size_t>(nm));
    tab_.p.resize(static_cast<size_t>(nm));
    tab_.p_dx.resize(static_cast<size_t>(nm));
    tab_.omega2_over_ik.resize(static_cast<size_t>(nm));
    for (int k = 0; k < nm; ++k) {
        tab_.omega2[static_cast<size_t>(k)] = multiplier_omega2(model, k);
        tab_.p[static_cast<size_t>(k)] = multiplier_P(model, k);
        tab_.p_dx[static_cast<size_t>(k)] =
            std::complex<double>(0.0, k * multiplier_P(model, k));
        tab_.omega2_over_ik[static_cast<size_t>(k)] =
            k == 0 ? std::complex<double>(0.0, 0.0)
                   : std::complex<double>(0.0, -multiplier_omega2(model, k) / k);
    }
    // Nyquist dropped in every multiplier application.
    tab_.omega2.back() = 0.0;
    tab_.p.back() = 0.0;
    tab_.p_dx.back() = 0.0;
    tab_.omega2_over_ik.back() = 0.0;
    tab_.keep_max = grid.dealias_cutoff();

    hat1_.resize(static_cast<size_t>(nm));
    hat2_.resize(static_cast<size_t>(nm));
    pqx_.resize(static_cast<size_t>(grid.size()));
    prod_.resize(static_cast<size_t>(grid.size()));
    work_.resize(static_cast<size_t>(grid.size()));
}

void Engine::apply(const std::vector<std::complex<double>>& table,
                   const double* in, double* out)
{
    fft_.forward(in, hat2_.data());
    for (size_t k = 0; k < table.size(); ++k)
        hat2_[k] *= table[k];
    fft_.inverse(hat2_.data(), out);
}

void Engine::apply(const std::vector<double>& table, const double* in,
                   double* out)
{
    fft_.forward(in, hat2_.data());
    for (size_t k = 0; k < table.size(); ++k)
        hat2_[k] *= table[k];
    fft_.inverse(hat2_.data(), out);
}

void Engine::dealias(double* inout)
{
    fft_.forward(inout, hat2_.data());
    for (int k = tab_.keep_max + 1; k < grid_.num_modes(); ++k)
        hat2_[static_cast<size_t>(k)] = 0.0;
    fft_.inverse(hat2_.data(), inout);
}

void Engine::swe_rhs(const double* eta, const double* q, const double* zeta,
                     bool linear, double* deta, double* dq)
{
    const int n = grid_.size();
    const int nm = grid_.num_modes();

    // One forward transform of q feeds both omega^2 q and P q_x.
    fft_.forward(q, hat1_.data());
    for (int k = 0; k < nm; ++k)
        hat2_[static_cast<size_t>(k)] =
            hat1_[static_cast<size_t>(k)] * tab_.omega2[static_cast<size_t>(k)];
    fft_.inverse(hat2_.data(), deta); // deta = omega^2 q so far
    for (int k = 0; k < nm; ++k)
        hat2_[static_cast<size_t>(k)] =
            hat1_[static_cast<size_t>(k)] * tab_.p_dx[static_cast<size_t>(k)];
    fft_.inverse(hat2_.data(), pqx_.data()); // P q_x

    // Product feeding the divergence term: (eta + zeta) P q_x in the full
    // model, zeta P q_x in the linearized one. De-aliased either way.
    if (linear) {
        for (int i = 0; i < n; ++i)
            prod_[static_cast<size_t>(i)] = zeta[i] * pqx_[static_cast<size_t>(i)];
    } else {
        for (int i = 0; i < n; ++i)
            prod_[static_cast<size_t>(i)] =
                (eta[i] + zeta[i]) * pqx_[static_cast<size_t>(i)];
    }
    fft_.forward(prod_.data(), hat2_.data());
    for (int k = tab_.keep_max + 1; k < nm; ++k)
        hat2_[static_cast<size_t>(k)] = 0.0;
    for (int k = 0; k < nm; ++k)
        hat2_[static_cast<size_t>(k)] *= tab_.p_dx[static_cast<size_t>(k)];
    fft_.inverse(hat2_.data(), work_.data()); // P dx[(eta+zeta) P q_x]

    for (int i = 0; i < n; ++i)
        deta[i] -= work_[static_cast<size_t>(i)];

    if (linear) {
        for (int i = 0; i < n; ++i)
            dq[i] = -eta[i];
        return;
    }

    // dq = -eta - (1/2) dealias((P q_x)^2)
    for (int i = 0; i < n; ++i)
        prod_[static_cast<size_t>(i)] =
            pqx_[static_cast<size_t>(i)] * pqx_[static_cast<size_t>(i)];
    dealias(prod_.data());
    for (int i = 0; i < n; ++i)
        dq[i] = -eta[i] - 0.5 * prod_[static_cast<size_t>(i)];
}

void Engine::observer_rhs(const double* eta_o, const double* q_o,
                          const double* eta_m, const double* zeta,
                          double lambda, double nu, bool linear, double* deta,
                          double* dq)
{
    swe_rhs(eta_o, q_o, zeta, linear, deta, dq);
    const int n = grid_.size();
    for (int i = 0; i < n; ++i) {
        const double mismatch = eta_o[i] - eta_m[i];
        deta[i] -= lambda * mismatch;
        dq[i] -= nu * mismatch;
    }
}

Engine& engine_for(const Grid& grid, const ModelSpec& model)
{
    struct Key {
        int n;
        ModelKind kind;
        double mu;
        bool operator<(const Key& o) const
        {
            if (n != o.n)
                return n < o.n;
            if (kind != o.kind)
                return kind < o.kind;
            return mu < o.mu;
        }
    };
    thread_local std::map<Key, std::unique_ptr<Engine>> cache;
    const Key key{grid.size(), model.kind, model.mu};
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Engine>(grid, model)).first;
    return *it->second;
}

} // namespace detail

} // namespace seabed
