#pragma once

// Power-of-two FFT and the Bluestein chirp factorization for exponential
// sums with an arbitrary phase step.

#include <complex>
#include <cstddef>
#include <vector>

#include "truncft/errors.hpp"

namespace truncft {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;

/// In-place radix-2 FFT; size must be a power of two.
/// Forward kernel is exp(-2*pi*i*j*k/n); the inverse divides by n.
inline void fft_pow2(std::vector<cplx>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ValidationError("fft_pow2: size must be a nonzero power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // Twiddles from sin/cos at each use; no recurrence drift.
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> root(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i)
        root[i] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w = root[j * stride];
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

/// Evaluate G_j = sum_{m=0}^{M-1} a_m exp(i*theta*m*j) for j = 0..n_out-1
/// in O(P log P), P = next power of two >= M + n_out - 1, via the Bluestein
/// identity m*j = (m^2 + j^2 - (j-m)^2)/2.
inline std::vector<cplx> chirp_exp_sum(const std::vector<cplx>& a, double theta, std::size_t n_out) {
    const std::size_t m_count = a.size();
    if (m_count == 0 || n_out == 0)
        throw ValidationError("chirp_exp_sum: empty input or output");
    std::size_t p = 1;
    while (p < m_count + n_out - 1) p <<= 1;

    std::vector<cplx> y(p, cplx(0.0, 0.0));
    std::vector<cplx> chirp(p, cplx(0.0, 0.0));
    for (std::size_t m = 0; m < m_count; ++m) {
        const double mm = static_cast<double>(m);
        y[m] = a[m] * std::polar(1.0, 0.5 * theta * mm * mm);
    }
    chirp[0] = cplx(1.0, 0.0);
    const std::size_t t_max = (m_count > n_out ? m_count : n_out) - 1;
    for (std::size_t t = 1; t <= t_max; ++t) {
        const double tt = static_cast<double>(t);
        const cplx w = std::polar(1.0, -0.5 * theta * tt * tt);
        if (t < n_out) chirp[t] = w;
        if (t < m_count) chirp[p - t] = w;
    }
    fft_pow2(y);
    fft_pow2(chirp);
    for (std::size_t i = 0; i < p; ++i) y[i] *= chirp[i];
    fft_pow2(y, true);

    std::vector<cplx> out(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        const double jj = static_cast<double>(j);
        out[j] = y[j] * std::polar(1.0, 0.5 * theta * jj * jj);
    }
    return out;
}

}  // namespace truncft
