#pragma once

// Truncated Fourier transform on [-1,1] and its inversion.
//
// Conventions used throughout the library:
//   forward:  (Ff)(xi) = (1/sqrt(2pi)) \int_{-1}^{1} f(x) e^{-i x xi} dx
//   inverse:  f(x) ~ (h/sqrt(2pi)) sum_m g_m e^{+i x xi_m}   on Xi_{B,h}
//
// The textbook closed form for the eigenfunction transform
// (closed_form_transform below) carries a 1/(2pi) prefactor and the e^{+i x xi}
// kernel instead; against the quadrature oracle one finds
//   (Ff_k)(xi) = sqrt(2pi) * conj(closed_form_transform(k, xi)),
// which is what closed_form_samples evaluates.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/fft.hpp"
#include "truncft/signals.hpp"

namespace truncft {

/// Uniform frequency grid Xi_{B,h} = (-B, -B+h, ..., B-h) with 2B/h samples.
struct FrequencyGrid {
    double bandwidth = 0.0;     // B
    double spacing = 0.0;       // h
    std::size_t sample_count = 0;  // M = 2B/h

    double node(std::size_t m) const { return -bandwidth + spacing * static_cast<double>(m); }

    /// Build from (B, h); 2B/h must be a positive integer. The error message
    /// names the nearest spacing that satisfies the constraint.
    static FrequencyGrid make(double bandwidth, double spacing) {
        if (bandwidth <= 0.0) throw ValidationError("FrequencyGrid: bandwidth must be positive");
        if (spacing <= 0.0) throw ValidationError("FrequencyGrid: spacing must be positive");
        const double ratio = 2.0 * bandwidth / spacing;
        const double rounded = std::round(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
            const double m_near = std::max(1.0, rounded);
            const double h_near = 2.0 * bandwidth / m_near;
            throw ValidationError(
                "FrequencyGrid: 2B/h = " + std::to_string(ratio) +
                " is not a positive integer; nearest valid spacing is " +
                std::to_string(h_near) + " (M = " + std::to_string(static_cast<long long>(m_near)) + ")");
        }
        return {bandwidth, spacing, static_cast<std::size_t>(rounded)};
    }

    static FrequencyGrid with_count(double bandwidth, std::size_t sample_count) {
        if (bandwidth <= 0.0) throw ValidationError("FrequencyGrid: bandwidth must be positive");
        if (sample_count < 1) throw ValidationError("FrequencyGrid: sample count must be >= 1");
        return {bandwidth, 2.0 * bandwidth / static_cast<double>(sample_count), sample_count};
    }
};

/// Complex spectral samples on a FrequencyGrid.
struct SpectralSamples {
    FrequencyGrid grid;
    std::vector<cplx> values;
};

/// Complex-valued reconstruction on the left-point nodes x_m = -1 + 2m/N.
/// Noisy measurements invert to genuinely complex samples, so this is kept
/// separate from the real-valued GridSignal.
struct Reconstruction {
    std::vector<cplx> values;
    double a = -1.0;
    double b = 1.0;

    std::size_t size() const { return values.size(); }
    double node(std::size_t m) const { return a + (b - a) * static_cast<double>(m) / static_cast<double>(values.size()); }

    GridSignal real_part() const {
        GridSignal out;
        out.values.reserve(values.size());
        for (const cplx& z : values) out.values.push_back(z.real());
        return out;
    }
};

namespace detail {

inline cplx csinc(cplx z) {
    if (std::abs(z) < 1e-8) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

// i^k and (-i)^k for integer k.
inline cplx unit_power(int k, bool negative) {
    static const cplx table[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    int r = ((k % 4) + 4) % 4;
    if (negative) r = (4 - r) % 4;
    return table[r];
}

}  // namespace detail

/// Closed-form transform of f_k = sin(k*pi*(x+1)/2):
///   (-e^{i z}(-1)^k pi k + pi k e^{-i z}) / (pi (k^2 pi^2 - 4 z^2)).
/// Evaluated through an equivalent factored expression that is pole-free at
/// z = +-k*pi/2, valid for all complex z. Equals (1/(2pi)) \int f_k e^{+ixz} dx.
inline cplx closed_form_transform(const EigenfunctionSpec& spec, cplx z) {
    if (spec.k < 1) throw ValidationError("closed_form_transform: mode index k must be >= 1");
    const double k = static_cast<double>(spec.k);
    const cplx t = z - k * kPi / 2.0;
    const cplx s = z + k * kPi / 2.0;
    if (std::abs(t) <= std::abs(s)) {
        // P(z) = i (-i)^k k sin(t) / (2 t (k pi + t))
        return cplx(0, 1) * detail::unit_power(spec.k, true) * k * detail::csinc(t) / (2.0 * (k * kPi + t));
    }
    // mirrored form around z = -k*pi/2
    return cplx(0, -1) * detail::unit_power(spec.k, false) * k * detail::csinc(s) / (2.0 * (k * kPi - s));
}

inline cplx closed_form_transform(const EigenfunctionSpec& spec, double xi) {
    return closed_form_transform(spec, cplx(xi, 0.0));
}

/// Forward transform of f_k in the library convention, by closed form:
/// (Ff_k)(z) = sqrt(2pi) * closed_form_transform(k, -z).
inline cplx forward_eigenfunction_transform(const EigenfunctionSpec& spec, cplx z) {
    return kSqrt2Pi * closed_form_transform(spec, -z);
}

/// Exact forward samples of f_k on a frequency grid (no quadrature error).
inline SpectralSamples closed_form_samples(const EigenfunctionSpec& spec, const FrequencyGrid& grid) {
    SpectralSamples out{grid, {}};
    out.values.resize(grid.sample_count);
    for (std::size_t m = 0; m < grid.sample_count; ++m)
        out.values[m] = forward_eigenfunction_transform(spec, cplx(grid.node(m), 0.0));
    return out;
}

/// Left-point quadrature of the forward transform on Xi_{B,h}:
/// values[m] = (1/sqrt(2pi)) (2/N) sum_n f(x_n) e^{-i x_n xi_m}.
inline SpectralSamples forward_truncated(const GridSignal& signal, const FrequencyGrid& grid) {
    SpectralSamples out{grid, {}};
    out.values.assign(grid.sample_count, cplx(0.0, 0.0));
    const double weight = signal.spacing() / kSqrt2Pi;
    for (std::size_t m = 0; m < grid.sample_count; ++m) {
        const double xi = grid.node(m);
        cplx acc(0.0, 0.0);
        for (std::size_t n = 0; n < signal.size(); ++n)
            acc += signal.values[n] * std::polar(1.0, -signal.node(n) * xi);
        out.values[m] = weight * acc;
    }
    return out;
}

/// FRFT inversion: evaluates (h/sqrt(2pi)) sum_m g_m e^{+i x_j xi_m} at the
/// n_out left-point nodes in O(P log P) via the Bluestein factorization.
inline Reconstruction frft_inverse(const SpectralSamples& meas, std::size_t n_out) {
    const std::size_t m_count = meas.grid.sample_count;
    if (m_count < 2) throw ValidationError("frft_inverse: need at least 2 spectral samples");
    if (meas.values.size() != m_count)
        throw ValidationError("frft_inverse: sample count does not match the grid");
    if (n_out < 1) throw ValidationError("frft_inverse: need at least 1 output node");

    const double h = meas.grid.spacing;
    const double bw = meas.grid.bandwidth;
    const double dx = 2.0 / static_cast<double>(n_out);
    // x_j xi_m = (-1 + j dx)(-B + m h): pull e^{-i m h} into the input and
    // e^{i B (1 - j dx)} into the output, leaving the chirp kernel e^{i m j h dx}.
    std::vector<cplx> a(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
        a[m] = meas.values[m] * std::polar(1.0, -static_cast<double>(m) * h);
    const std::vector<cplx> sums = chirp_exp_sum(a, h * dx, n_out);

    Reconstruction rec;
    rec.values.resize(n_out);
    const double scale = h / kSqrt2Pi;
    for (std::size_t j = 0; j < n_out; ++j)
        rec.values[j] = scale * std::polar(1.0, bw * (1.0 - static_cast<double>(j) * dx)) * sums[j];
    return rec;
}

/// O(M * n_out) direct summation of the same quadrature; correctness oracle
/// for frft_inverse.
inline Reconstruction direct_inverse_oracle(const SpectralSamples& meas, std::size_t n_out) {
    const std::size_t m_count = meas.grid.sample_count;
    if (m_count < 2) throw ValidationError("direct_inverse_oracle: need at least 2 spectral samples");
    if (n_out < 1) throw ValidationError("direct_inverse_oracle: need at least 1 output node");

    Reconstruction rec;
    rec.values.assign(n_out, cplx(0.0, 0.0));
    const double scale = meas.grid.spacing / kSqrt2Pi;
    for (std::size_t j = 0; j < n_out; ++j) {
        const double x = rec.node(j);
        cplx acc(0.0, 0.0);
        for (std::size_t m = 0; m < m_count; ++m)
            acc += meas.values[m] * std::polar(1.0, x * meas.grid.node(m));
        rec.values[j] = scale * acc;
    }
    return rec;
}

/// Left-point quadrature of the L2(-B,B) norm: sqrt(h * sum |g|^2).
inline double spectral_l2_norm(const SpectralSamples& samples) {
    double acc = 0.0;
    for (const cplx& z : samples.values) acc += std::norm(z);
    return std::sqrt(samples.grid.spacing * acc);
}

/// Relative L2 discrepancy between two reconstructions (oracle checks).
inline double relative_l2_error(const Reconstruction& got, const Reconstruction& want) {
    if (got.size() != want.size()) throw ValidationError("relative_l2_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += std::norm(got.values[i] - want.values[i]);
        den += std::norm(want.values[i]);
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

}  // namespace truncft
