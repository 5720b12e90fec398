#pragma once

// Real signals sampled on [-1,1], the Laplacian eigenfunction family
// f_k(x) = sin(k*pi*(x+1)/2), and the frequency number ||f'|| / ||f||.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/fft.hpp"

namespace truncft {

/// Samples at the left-point nodes x_m = -1 + 2m/N, m = 0..N-1.
struct GridSignal {
    std::vector<double> values;
    double a = -1.0;
    double b = 1.0;

    std::size_t size() const { return values.size(); }
    double spacing() const { return (b - a) / static_cast<double>(values.size()); }
    double node(std::size_t m) const { return a + (b - a) * static_cast<double>(m) / static_cast<double>(values.size()); }
};

struct EigenfunctionSpec {
    int k = 1;
};

struct FrequencyNumber {
    double omega = 0.0;
    double lambda_min() const { return omega * omega; }
};

inline double eigenfunction_value(const EigenfunctionSpec& spec, double x) {
    return std::sin(static_cast<double>(spec.k) * kPi * (x + 1.0) / 2.0);
}

inline GridSignal eval_eigenfunction(const EigenfunctionSpec& spec, std::size_t n_samples) {
    if (spec.k < 1) throw ValidationError("eval_eigenfunction: mode index k must be >= 1");
    if (n_samples < 2) throw ValidationError("eval_eigenfunction: need at least 2 samples");
    GridSignal out;
    out.values.resize(n_samples);
    for (std::size_t m = 0; m < n_samples; ++m)
        out.values[m] = eigenfunction_value(spec, out.node(m));
    return out;
}

/// Left-point quadrature of the L2(-1,1) norm: sqrt(spacing * sum v^2).
inline double l2_norm(const GridSignal& signal) {
    double acc = 0.0;
    for (double v : signal.values) acc += v * v;
    return std::sqrt(signal.spacing() * acc);
}

namespace detail {

// Admission check for the endpoint-zero condition. The sample nearest an
// endpoint sits up to one spacing away from it, so the tolerance allows a
// one-sided-slope excursion of that size on top of the relative floor.
inline bool endpoint_vanishes(double v_end, double v_next, double max_abs) {
    const double tol = 1e-8 * max_abs + 1.5 * std::abs(v_end - v_next);
    return std::abs(v_end) <= tol;
}

}  // namespace detail

/// Discrete ||f'|| / ||f|| with central differences in the interior and
/// one-sided differences at the ends. Rejects signals that do not vanish
/// at both endpoints (the grid convention places no node at x = +1, so the
/// last sample is tested against a spacing-aware tolerance).
inline FrequencyNumber frequency_number(const GridSignal& signal) {
    const std::size_t n = signal.size();
    if (n < 3) throw ValidationError("frequency_number: need at least 3 samples");
    const double norm = l2_norm(signal);
    if (norm <= 0.0) throw ValidationError("frequency_number: signal has zero norm");

    double max_abs = 0.0;
    for (double v : signal.values) max_abs = std::max(max_abs, std::abs(v));
    if (!detail::endpoint_vanishes(signal.values.front(), signal.values[1], max_abs) ||
        !detail::endpoint_vanishes(signal.values.back(), signal.values[n - 2], max_abs))
        throw ValidationError("frequency_number: signal does not vanish at the interval endpoints");

    const double dx = signal.spacing();
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        double d;
        if (m == 0)
            d = (signal.values[1] - signal.values[0]) / dx;
        else if (m == n - 1)
            d = (signal.values[n - 1] - signal.values[n - 2]) / dx;
        else
            d = (signal.values[m + 1] - signal.values[m - 1]) / (2.0 * dx);
        acc += d * d;
    }
    return {std::sqrt(dx * acc) / norm};
}

}  // namespace truncft
