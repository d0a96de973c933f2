#pragma once

// In-place iterative radix-2 FFT. Sizes are powers of two (enforced by GridSpec).

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

namespace qangle::fft {

template <typename Real>
void transform(std::span<std::complex<Real>> data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0) return;
    if (!std::has_single_bit(n)) throw std::invalid_argument("fft size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const Real sign = inverse ? Real(1) : Real(-1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            // Twiddles evaluated directly rather than by recurrence to keep
            // full precision for large n.
            const Real theta = sign * Real(2) * std::numbers::pi_v<Real> * Real(k) / Real(len);
            const std::complex<Real> w(std::cos(theta), std::sin(theta));
            for (std::size_t start = 0; start < n; start += len) {
                const auto u = data[start + k];
                const auto v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

// X_k = sum_j x_j e^{-2 pi i jk/n}
template <typename Real>
void forward(std::span<std::complex<Real>> data) {
    transform(data, false);
}

// x_j = (1/n) sum_k X_k e^{+2 pi i jk/n}
template <typename Real>
void inverse(std::span<std::complex<Real>> data) {
    transform(data, true);
    const Real scale = Real(1) / Real(data.size());
    for (auto& v : data) v *= scale;
}

} // namespace qangle::fft
