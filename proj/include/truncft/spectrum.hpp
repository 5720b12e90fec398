#pragma once

// Nystrom discretization of the truncated Fourier transform as a matrix,
// its singular values, and the plateau/decay summary.
//
// The bandwidth parameter B here counts Nyquist samples over [-1,1]: the
// operator acts on the radian frequency window [-pi*B/2, pi*B/2], which is
// the normalization under which the classical plateau facts hold with
// index floor(B) (sigma_{floor(B)-1} > 0.4, sigma_{floor(B)+1} < 0.6, first
// ~floor(B) values near 1). With the window read in plain radians the
// plateau sits at 2B/pi instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/fft.hpp"

namespace truncft {

struct OperatorMatrix {
    std::size_t rows = 0;  // frequency samples
    std::size_t cols = 0;  // spatial samples
    double bandwidth = 0.0;    // Nyquist-count parameter B
    double radian_band = 0.0;  // pi*B/2
    std::vector<cplx> entries;  // row-major

    cplx at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

/// Entry (m,n) = (1/sqrt(2pi)) e^{-i x_n xi_m} sqrt(dx * dxi) with left-point
/// grids on [-1,1] and the radian window; the symmetric sqrt-weight scaling
/// makes the matrix singular values converge to the operator's.
inline OperatorMatrix build_operator(double bandwidth, std::size_t n_space, std::size_t n_freq) {
    if (bandwidth <= 0.0) throw ValidationError("build_operator: bandwidth must be positive");
    if (n_space < 4 || n_freq < 4) throw ValidationError("build_operator: need at least 4 samples per side");
    OperatorMatrix op;
    op.rows = n_freq;
    op.cols = n_space;
    op.bandwidth = bandwidth;
    op.radian_band = kPi * bandwidth / 2.0;
    const double dx = 2.0 / static_cast<double>(n_space);
    const double dxi = 2.0 * op.radian_band / static_cast<double>(n_freq);
    const double weight = std::sqrt(dx * dxi) / kSqrt2Pi;
    op.entries.resize(n_freq * n_space);
    for (std::size_t m = 0; m < n_freq; ++m) {
        const double xi = -op.radian_band + dxi * static_cast<double>(m);
        for (std::size_t n = 0; n < n_space; ++n) {
            const double x = -1.0 + dx * static_cast<double>(n);
            op.entries[m * n_space + n] = weight * std::polar(1.0, -x * xi);
        }
    }
    return op;
}

namespace detail {

/// One-sided (Hestenes) Jacobi on the columns of a column-major matrix.
/// Returns the descending singular values.
inline std::vector<double> hestenes_jacobi(std::vector<cplx>& col_major, std::size_t rows,
                                           std::size_t cols) {
    const double threshold = 1e-14;
    const std::size_t max_sweeps = 64;

    std::vector<double> sq(cols, 0.0);
    const auto col = [&](std::size_t c) { return col_major.data() + c * rows; };
    const auto recompute = [&]() {
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::size_t r = 0; r < rows; ++r) acc += std::norm(col(c)[r]);
            sq[c] = acc;
        }
    };
    recompute();

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                cplx inner(0.0, 0.0);
                cplx* cp = col(p);
                cplx* cq = col(q);
                for (std::size_t r = 0; r < rows; ++r) inner += std::conj(cp[r]) * cq[r];
                const double off = std::abs(inner);
                if (off <= threshold * std::sqrt(sq[p] * sq[q]) || off == 0.0) continue;
                rotated = true;
                // Absorb the phase into column p, then a real Jacobi rotation.
                const cplx phase = inner / off;
                const double tau = (sq[q] - sq[p]) / (2.0 * off);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < rows; ++r) {
                    const cplx vp = phase * cp[r];
                    const cplx vq = cq[r];
                    cp[r] = c * vp - s * vq;
                    cq[r] = s * vp + c * vq;
                }
                const double sp = sq[p], squ = sq[q];
                sq[p] = c * c * sp + s * s * squ - 2.0 * c * s * off;
                sq[q] = s * s * sp + c * c * squ + 2.0 * c * s * off;
            }
        }
        recompute();  // keep cached norms exact between sweeps
        if (!rotated) {
            std::vector<double> sigma(cols);
            for (std::size_t c = 0; c < cols; ++c) sigma[c] = std::sqrt(sq[c]);
            std::sort(sigma.begin(), sigma.end(), std::greater<double>());
            return sigma;
        }
    }
    throw NumericalError("hestenes_jacobi: no convergence within the sweep cap");
}

}  // namespace detail

/// Full singular spectrum, descending.
inline std::vector<double> singular_values(const OperatorMatrix& op) {
    if (op.entries.size() != op.rows * op.cols)
        throw ValidationError("singular_values: entry count does not match the shape");
    std::vector<cplx> col_major(op.rows * op.cols);
    for (std::size_t r = 0; r < op.rows; ++r)
        for (std::size_t c = 0; c < op.cols; ++c) col_major[c * op.rows + r] = op.entries[r * op.cols + c];
    return detail::hestenes_jacobi(col_major, op.rows, op.cols);
}

struct DecayFit {
    std::size_t plateau_count = 0;  // number of sigma_j > 0.9
    double decay_rate = 0.0;        // log-linear slope past the plateau, per index
    std::size_t fit_points = 0;
};

/// Plateau size and the least-squares slope of log sigma_{floor(B)+k} vs k
/// over the range above the 1e-10 floor.
inline DecayFit decay_fit(std::span<const double> sigmas, double bandwidth) {
    if (bandwidth <= 0.0) throw ValidationError("decay_fit: bandwidth must be positive");
    const std::size_t plateau_index = static_cast<std::size_t>(std::floor(bandwidth));
    const double floor_value = 1e-10;
    std::size_t above = 0;
    for (double s : sigmas)
        if (s > floor_value) ++above;
    if (above < plateau_index + 10)
        throw ValidationError("decay_fit: too few singular values above the numerical floor");

    DecayFit fit;
    for (double s : sigmas)
        if (s > 0.9) ++fit.plateau_count;

    // 1-based sigma_{floor(B)+k}, k = 1, 2, ...
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t j = plateau_index; j < sigmas.size() && sigmas[j] > floor_value; ++j) {
        const double x = static_cast<double>(j - plateau_index + 1);
        const double y = std::log(sigmas[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    fit.fit_points = n;
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    fit.decay_rate = (static_cast<double>(n) * sxy - sx * sy) / denom;
    return fit;
}

}  // namespace truncft
