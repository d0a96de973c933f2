#pragma once

// Position windows (spectral projectors of X), translations e^{-iaP/hbar},
// the discrete momentum representation, and moments of X and P.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <type_traits>
#include <vector>

#include "qangle/core_state.hpp"
#include "qangle/fft.hpp"

namespace qangle {

// Half-open interval (a, b]; grid point x_j is inside iff a < x_j <= b.
class Window {
public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    Window(double a, double b) : a_(a), b_(b) {
        if (std::isnan(a) || std::isnan(b) || !(a < b)) throw ParameterError("window: a < b");
    }

    static Window full() { return {-inf, inf}; }
    static Window at_most(double b) { return {-inf, b}; }
    static Window above(double a) { return {a, inf}; }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    bool contains(double x) const noexcept { return a_ < x && x <= b_; }

    Window shifted(double by) const { return {a_ + by, b_ + by}; }

    friend bool operator==(const Window&, const Window&) = default;

private:
    double a_;
    double b_;
};

namespace detail {

// Endpoints closer than this fraction of a cell to a grid point are treated as
// lying on it, so lattice-aligned windows have unambiguous membership.
inline constexpr double lattice_snap = 1e-9;

// Number of grid points with x_j <= e.
inline std::size_t count_at_or_below(const GridSpec& g, double e) {
    if (e == -Window::inf) return 0;
    if (e == Window::inf) return g.size();
    double t = (e - g.x_min()) / g.dx();
    const double rounded = std::round(t);
    if (std::abs(t - rounded) <= lattice_snap) t = rounded;
    const double c = std::floor(t) + 1.0;
    if (c <= 0.0) return 0;
    if (c >= static_cast<double>(g.size())) return g.size();
    return static_cast<std::size_t>(c);
}

} // namespace detail

// Contiguous index range [first, last) of grid points inside `w`.
struct IndexRange {
    std::size_t first;
    std::size_t last;
    bool contains(std::size_t j) const noexcept { return first <= j && j < last; }
};

inline IndexRange index_range(const GridSpec& g, const Window& w) {
    const std::size_t lo = detail::count_at_or_below(g, w.a());
    const std::size_t hi = detail::count_at_or_below(g, w.b());
    return {lo, std::max(lo, hi)};
}

// Zeroes amplitudes outside the window. Not normalized.
template <GridState S>
StateVector project(const S& psi, const Window& w) {
    const auto range = index_range(psi.grid(), w);
    const auto in = psi.amplitudes();
    std::vector<complex> out(in.size(), complex{0.0, 0.0});
    for (std::size_t j = range.first; j < range.last; ++j) out[j] = in[j];
    return StateVector(psi.grid(), std::move(out));
}

template <GridState S>
double window_mass(const S& psi, const Window& w) {
    const auto range = index_range(psi.grid(), w);
    const auto in = psi.amplitudes();
    double s = 0.0;
    for (std::size_t j = range.first; j < range.last; ++j) s += std::norm(in[j]);
    return s * psi.grid().dx();
}

// Momentum-space amplitudes indexed by signed wavenumber k' = i - n/2, so
// index 0 holds k' = -n/2 and index n/2 holds p = 0.
class MomentumView {
public:
    MomentumView(GridSpec grid, double hbar, std::vector<complex> amp)
        : grid_(grid), hbar_(hbar), amp_(std::move(amp)) {}

    const GridSpec& grid() const noexcept { return grid_; }
    double hbar() const noexcept { return hbar_; }
    std::span<const complex> amplitudes() const noexcept { return amp_; }
    std::size_t size() const noexcept { return amp_.size(); }

    long long wavenumber(std::size_t i) const noexcept {
        return static_cast<long long>(i) - static_cast<long long>(amp_.size() / 2);
    }
    double dp() const noexcept { return grid_.dp(hbar_); }
    double p(std::size_t i) const noexcept { return dp() * static_cast<double>(wavenumber(i)); }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return s * dp();
    }

private:
    GridSpec grid_;
    double hbar_;
    std::vector<complex> amp_;
};

// Discrete approximation of (2 pi hbar)^{-1/2} Int psi(x) e^{-ipx/hbar} dx.
template <GridState S>
MomentumView to_momentum(const S& psi, const Config& cfg = {}) {
    const auto& g = psi.grid();
    const std::size_t n = g.size();
    const auto in = psi.amplitudes();
    std::vector<complex> work(in.begin(), in.end());
    fft::forward<double>(work);

    const double scale = g.dx() / std::sqrt(2.0 * std::numbers::pi * cfg.hbar);
    const double dp = g.dp(cfg.hbar);
    std::vector<complex> amp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long k = static_cast<long long>(i) - static_cast<long long>(n / 2);
        const std::size_t bin = static_cast<std::size_t>((k + static_cast<long long>(n)) % static_cast<long long>(n));
        const double p = dp * static_cast<double>(k);
        amp[i] = scale * std::polar(1.0, -p * g.x_min() / cfg.hbar) * work[bin];
    }
    return MomentumView(g, cfg.hbar, std::move(amp));
}

inline StateVector to_position(const MomentumView& view) {
    const auto& g = view.grid();
    const std::size_t n = g.size();
    const double scale = std::sqrt(2.0 * std::numbers::pi * view.hbar()) / g.dx();
    std::vector<complex> work(n);
    const auto amp = view.amplitudes();
    for (std::size_t i = 0; i < n; ++i) {
        const long long k = view.wavenumber(i);
        const std::size_t bin = static_cast<std::size_t>((k + static_cast<long long>(n)) % static_cast<long long>(n));
        work[bin] = scale * std::polar(1.0, view.p(i) * g.x_min() / view.hbar()) * amp[i];
    }
    fft::inverse<double>(work);
    return StateVector(g, std::move(work));
}

namespace detail {

template <GridState S>
std::vector<complex> translated_amplitudes(const S& psi, double a, const Config& cfg) {
    const auto& g = psi.grid();
    const std::size_t n = g.size();
    const auto in = psi.amplitudes();
    std::vector<complex> out(n);

    if (auto steps = g.lattice_steps(a, cfg.quantile_tol)) {
        // psi'(x_j) = psi(x_j - a): a circular permutation of the amplitudes.
        const long long nn = static_cast<long long>(n);
        const std::size_t k = static_cast<std::size_t>(((*steps % nn) + nn) % nn);
        for (std::size_t j = 0; j < n; ++j) out[(j + k) % n] = in[j];
        return out;
    }

    out.assign(in.begin(), in.end());
    fft::forward<double>(out);
    for (std::size_t bin = 0; bin < n; ++bin) {
        const long long k = bin < n / 2 ? static_cast<long long>(bin)
                                        : static_cast<long long>(bin) - static_cast<long long>(n);
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) * a / g.length();
        out[bin] *= std::polar(1.0, phase);
    }
    fft::inverse<double>(out);
    return out;
}

} // namespace detail

// Applies e^{-iaP/hbar}, i.e. psi'(x) = psi(x - a) on the periodic grid.
// Lattice multiples of dx are exact permutations; other shifts go through the
// momentum representation.
template <GridState S>
S translate(const S& psi, double a, const Config& cfg = {}) {
    StateVector v(psi.grid(), detail::translated_amplitudes(psi, a, cfg));
    if constexpr (std::is_same_v<S, WaveFunction>) {
        return WaveFunction(std::move(v), cfg);
    } else {
        return v;
    }
}

struct Moments {
    double mean;
    double stddev;
};

inline Moments position_moments(const WaveFunction& psi, const Config& cfg = {}) {
    const auto& g = psi.grid();
    const std::size_t n = g.size();
    const std::size_t margin = std::min<std::size_t>(5, n / 2);
    double seam = 0.0;
    for (std::size_t j = 0; j < margin; ++j) seam += std::norm(psi[j]) + std::norm(psi[n - 1 - j]);
    seam *= g.dx();
    if (!(seam < cfg.guard_tol)) throw WraparoundError(seam);

    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += g.x(j) * std::norm(psi[j]);
    mean *= g.dx();
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = g.x(j) - mean;
        var += d * d * std::norm(psi[j]);
    }
    var *= g.dx();
    return {mean, std::sqrt(std::max(0.0, var))};
}

inline Moments momentum_moments(const MomentumView& view, const Config& cfg = {}) {
    const std::size_t n = view.size();
    const auto amp = view.amplitudes();
    const double cutoff = 0.9 * static_cast<double>(n / 2);
    double edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(static_cast<double>(view.wavenumber(i))) > cutoff) edge += std::norm(amp[i]);
    }
    edge *= view.dp();
    if (!(edge < cfg.guard_tol)) throw AliasingError(edge);

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += view.p(i) * std::norm(amp[i]);
    mean *= view.dp();
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = view.p(i) - mean;
        var += d * d * std::norm(amp[i]);
    }
    var *= view.dp();
    return {mean, std::sqrt(std::max(0.0, var))};
}

inline Moments momentum_moments(const WaveFunction& psi, const Config& cfg = {}) {
    return momentum_moments(to_momentum(psi, cfg), cfg);
}

// Norm of  T(+a) Omega_{w-a} T(-a) psi - Omega_w psi  for a lattice shift a.
// Zero whenever both w and w-a sit inside one period of the grid.
inline double covariance_residual(const WaveFunction& psi, const Window& w, double a, const Config& cfg = {}) {
    if (!psi.grid().lattice_steps(a, cfg.quantile_tol)) throw NonLatticeShiftError(a);
    const StateVector lhs = translate(project(translate(psi.vector(), -a, cfg), w.shifted(-a)), a, cfg);
    const StateVector rhs = project(psi, w);
    double s = 0.0;
    for (std::size_t j = 0; j < lhs.size(); ++j) s += std::norm(lhs[j] - rhs[j]);
    return std::sqrt(s * psi.grid().dx());
}

} // namespace qangle
