#pragma once

// Grid, state vectors and the Fubini-Study quantum angle.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qangle/errors.hpp"

namespace qangle {

using complex = std::complex<double>;

// Periodic uniform 1-D position grid. Point j sits at x_min + j*dx and owns the
// cell [x_j, x_j + dx).
class GridSpec {
public:
    GridSpec(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
        if (!(std::isfinite(x_min) && std::isfinite(x_max)) || !(x_max > x_min)) {
            throw ParameterError("grid: x_max > x_min");
        }
        if (n < 8 || !std::has_single_bit(n)) {
            throw ParameterError("grid: n >= 8 and a power of two");
        }
        dx_ = (x_max_ - x_min_) / static_cast<double>(n_);
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }

    // Spacing of the reciprocal lattice, 2*pi*hbar / L.
    double dp(double hbar) const noexcept { return 2.0 * std::numbers::pi * hbar / length(); }

    // Nearest lattice index offset for a displacement `a`, if `a` is a lattice
    // multiple within tol*dx.
    std::optional<long long> lattice_steps(double a, double tol) const noexcept {
        const double steps = a / dx_;
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) <= tol) return static_cast<long long>(rounded);
        return std::nullopt;
    }

    // Grids compare by value; states may only be combined on identical grids.
    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double dx_;
};

struct Config {
    double hbar = 1.0;
    double norm_tol = 1e-10;
    double quantile_tol = 1e-12;
    // Mass threshold for the wraparound and aliasing guards.
    double guard_tol = 1e-8;
    // Expert override of the tail threshold; unset means (1 - sin 1)/2.
    std::optional<double> epsilon_override;

    void validate() const {
        if (!(hbar > 0)) throw ParameterError("config: hbar > 0");
        if (!(norm_tol > 0)) throw ParameterError("config: norm_tol > 0");
        if (!(quantile_tol > 0)) throw ParameterError("config: quantile_tol > 0");
        if (!(guard_tol > 0)) throw ParameterError("config: guard_tol > 0");
        if (epsilon_override && !(*epsilon_override > 0 && *epsilon_override < 0.5)) {
            throw ParameterError("config: 0 < epsilon < 1/2");
        }
    }
};

// Any amplitude vector on a grid, normalized or not (projections, raw input).
class StateVector {
public:
    StateVector(GridSpec grid, std::vector<complex> amp) : grid_(grid), amp_(std::move(amp)) {
        if (amp_.size() != grid_.size()) throw ParameterError("state: one amplitude per grid point");
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const complex> amplitudes() const noexcept { return amp_; }
    std::span<complex> amplitudes() noexcept { return amp_; }
    const complex& operator[](std::size_t j) const { return amp_[j]; }
    std::size_t size() const noexcept { return amp_.size(); }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return s * grid_.dx();
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    GridSpec grid_;
    std::vector<complex> amp_;
};

// A normalized state. Immutable; every operation returns a new value.
class WaveFunction {
public:
    // Adopts amplitudes that are already normalized; throws NormalizationError otherwise.
    WaveFunction(StateVector v, const Config& cfg = {}) : v_(std::move(v)) {
        const double norm = v_.squared_norm();
        if (!(std::abs(norm - 1.0) <= cfg.norm_tol)) throw NormalizationError(norm);
    }

    const GridSpec& grid() const noexcept { return v_.grid(); }
    std::span<const complex> amplitudes() const noexcept { return v_.amplitudes(); }
    const complex& operator[](std::size_t j) const { return v_[j]; }
    std::size_t size() const noexcept { return v_.size(); }
    const StateVector& vector() const noexcept { return v_; }

    friend bool operator==(const WaveFunction&, const WaveFunction&) = default;

private:
    StateVector v_;
};

template <typename S>
concept GridState = requires(const S& s) {
    { s.grid() } -> std::convertible_to<const GridSpec&>;
    { s.amplitudes() } -> std::convertible_to<std::span<const complex>>;
};

inline WaveFunction normalize(std::vector<complex> raw, const GridSpec& grid, const Config& cfg = {}) {
    StateVector v(grid, std::move(raw));
    const double norm = v.squared_norm();
    if (!(norm > 0.0)) throw ZeroStateError();
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : v.amplitudes()) a *= scale;
    return WaveFunction(std::move(v), cfg);
}

inline WaveFunction normalize(const StateVector& raw, const Config& cfg = {}) {
    auto amps = raw.amplitudes();
    return normalize(std::vector<complex>(amps.begin(), amps.end()), raw.grid(), cfg);
}

// Sum_j conj(phi_j) psi_j dx
template <GridState A, GridState B>
complex inner(const A& phi, const B& psi) {
    if (!(phi.grid() == psi.grid())) throw GridMismatchError();
    const auto a = phi.amplitudes();
    const auto b = psi.amplitudes();
    complex s{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
    return s * phi.grid().dx();
}

namespace detail {

// Angle between unit rays. For overlaps close to 1 arccos loses half the
// digits, so the chord length between phase-aligned vectors is used instead:
// |psi - e^{i arg<phi|psi>} phi| = 2 sin(angle / 2).
template <GridState A, GridState B>
double angle_between_normalized(const A& phi, const B& psi) {
    const complex ov = inner(phi, psi);
    const double mag = std::min(1.0, std::abs(ov));
    if (mag < 0.5) return std::acos(mag);
    const complex phase = mag > 0.0 ? ov / std::abs(ov) : complex{1.0, 0.0};
    const auto a = phi.amplitudes();
    const auto b = psi.amplitudes();
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d2 += std::norm(b[j] - phase * a[j]);
    const double chord = std::sqrt(d2 * phi.grid().dx());
    return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

} // namespace detail

// Fubini-Study distance arccos|<phi|psi>|, in [0, pi/2].
inline double quantum_angle(const WaveFunction& phi, const WaveFunction& psi) {
    return detail::angle_between_normalized(phi, psi);
}

// Same for raw vectors; both must be normalized within cfg.norm_tol.
inline double quantum_angle(const StateVector& phi, const StateVector& psi, const Config& cfg = {}) {
    if (!(phi.grid() == psi.grid())) throw GridMismatchError();
    for (const auto* v : {&phi, &psi}) {
        const double norm = v->squared_norm();
        if (!(std::abs(norm - 1.0) <= cfg.norm_tol)) throw NormalizationError(norm);
    }
    return detail::angle_between_normalized(phi, psi);
}

} // namespace qangle
