#pragma once

// Finite-difference harmonic measure of the slit [0,B] x {0} in the
// half-strip {Re z > 0, |Im z| < L}, truncated at Re z = truncation_length.
//
// Five-point Laplace stencil, boundary value 1 on the slit and 0 on the
// remaining boundary (including the artificial far end), solved by
// conjugate gradients. The slit nodes are Dirichlet nodes shared by both
// sides, so the rows just above and below couple to the slit value and not
// to each other.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "truncft/errors.hpp"

namespace truncft {

struct HarmonicSolveOptions {
    double tolerance = 1e-10;      // on ||b - A u|| / max(1, ||b||)
    std::size_t max_iterations = 200000;
};

struct HarmonicMeasureField {
    double strip_half_height = 0.0;  // L
    double slit_length = 0.0;        // B
    double truncation_length = 0.0;  // domain is [0, X] x [-L, L]
    double mesh = 0.0;
    std::size_t nx = 0;  // nodes are (nx+1) x (ny+1)
    std::size_t ny = 0;
    std::vector<double> values;  // row-major, index i*(ny+1)+j; x=i*mesh, y=-L+j*mesh
    std::size_t iterations = 0;
    double residual = 0.0;

    double at(std::size_t i, std::size_t j) const { return values[i * (ny + 1) + j]; }

    /// Bilinear interpolation; throws outside the solved rectangle.
    double sample(double x, double y) const {
        const double fi = x / mesh;
        const double fj = (y + strip_half_height) / mesh;
        if (fi < -1e-9 || fi > static_cast<double>(nx) + 1e-9 ||
            fj < -1e-9 || fj > static_cast<double>(ny) + 1e-9)
            throw ValidationError("HarmonicMeasureField::sample: point outside the solved domain");
        std::size_t i0 = static_cast<std::size_t>(std::max(0.0, std::min(fi, static_cast<double>(nx) - 1.0)));
        std::size_t j0 = static_cast<std::size_t>(std::max(0.0, std::min(fj, static_cast<double>(ny) - 1.0)));
        const double tx = std::min(std::max(fi - static_cast<double>(i0), 0.0), 1.0);
        const double ty = std::min(std::max(fj - static_cast<double>(j0), 0.0), 1.0);
        return (1.0 - tx) * (1.0 - ty) * at(i0, j0) + tx * (1.0 - ty) * at(i0 + 1, j0) +
               (1.0 - tx) * ty * at(i0, j0 + 1) + tx * ty * at(i0 + 1, j0 + 1);
    }
};

namespace detail {

inline std::size_t conforming_count(double length, double mesh, const char* what) {
    const double ratio = length / mesh;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError(std::string("solve_harmonic_measure: mesh does not divide ") + what);
    return static_cast<std::size_t>(rounded);
}

}  // namespace detail

/// Smallest mesh-conforming domain length covering max(4B, 4L, 8) and, when
/// the field will be sampled at eval_x, leaving 8L of decay room past it.
inline double default_truncation_length(double strip_half_height, double slit_length, double mesh,
                                        double eval_x = 0.0) {
    double need = std::max({4.0 * slit_length, 4.0 * strip_half_height, 8.0});
    if (eval_x > 0.0) need = std::max(need, eval_x + 8.0 * strip_half_height);
    return std::ceil(need / mesh) * mesh;
}

inline HarmonicMeasureField solve_harmonic_measure(double strip_half_height, double slit_length,
                                                   double truncation_length, double mesh,
                                                   const HarmonicSolveOptions& options = {}) {
    if (strip_half_height <= 0.0 || slit_length <= 0.0 || mesh <= 0.0)
        throw ValidationError("solve_harmonic_measure: L, B and mesh must be positive");
    if (truncation_length < std::max({4.0 * slit_length, 4.0 * strip_half_height, 8.0}) - 1e-9)
        throw ValidationError("solve_harmonic_measure: truncation_length must cover max(4B, 4L, 8)");

    const std::size_t nx = detail::conforming_count(truncation_length, mesh, "truncation_length");
    const std::size_t ny = 2 * detail::conforming_count(strip_half_height, mesh, "L");
    const std::size_t slit_end = detail::conforming_count(slit_length, mesh, "B");
    if (slit_end >= nx)
        throw ValidationError("solve_harmonic_measure: slit reaches the truncation boundary");
    const std::size_t j_axis = ny / 2;
    const std::size_t stride = ny + 1;

    const auto is_slit = [&](std::size_t i, std::size_t j) { return j == j_axis && i <= slit_end; };

    // Pack the unknowns (interior nodes off the slit).
    std::vector<std::int64_t> index((nx + 1) * stride, -1);
    std::vector<std::uint32_t> cell_i, cell_j;
    for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1; j < ny; ++j)
            if (!is_slit(i, j)) {
                index[i * stride + j] = static_cast<std::int64_t>(cell_i.size());
                cell_i.push_back(static_cast<std::uint32_t>(i));
                cell_j.push_back(static_cast<std::uint32_t>(j));
            }
    const std::size_t n_unknowns = cell_i.size();

    // Neighbor table (unknown index or -1) and Dirichlet load.
    std::vector<std::int64_t> nbr(4 * n_unknowns, -1);
    std::vector<double> rhs(n_unknowns, 0.0);
    for (std::size_t u = 0; u < n_unknowns; ++u) {
        const std::size_t i = cell_i[u], j = cell_j[u];
        const std::size_t ni[4] = {i - 1, i + 1, i, i};
        const std::size_t nj[4] = {j, j, j - 1, j + 1};
        for (int d = 0; d < 4; ++d) {
            const std::int64_t v = index[ni[d] * stride + nj[d]];
            nbr[4 * u + d] = v;
            if (v < 0 && is_slit(ni[d], nj[d])) rhs[u] += 1.0;
        }
    }

    const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t u = 0; u < n_unknowns; ++u) {
            double acc = 4.0 * x[u];
            for (int d = 0; d < 4; ++d) {
                const std::int64_t v = nbr[4 * u + d];
                if (v >= 0) acc -= x[static_cast<std::size_t>(v)];
            }
            y[u] = acc;
        }
    };

    std::vector<double> u(n_unknowns, 0.0), r = rhs, p = rhs, ap(n_unknowns);
    double rr = 0.0, bb = 0.0;
    for (std::size_t q = 0; q < n_unknowns; ++q) {
        rr += r[q] * r[q];
        bb += rhs[q] * rhs[q];
    }
    const double stop = options.tolerance * std::max(1.0, std::sqrt(bb));
    std::size_t iter = 0;
    while (std::sqrt(rr) > stop) {
        if (iter >= options.max_iterations)
            throw NumericalError("solve_harmonic_measure: conjugate gradients did not reach the residual cap in " +
                                 std::to_string(options.max_iterations) + " iterations");
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t q = 0; q < n_unknowns; ++q) pap += p[q] * ap[q];
        const double alpha = rr / pap;
        double rr_next = 0.0;
        for (std::size_t q = 0; q < n_unknowns; ++q) {
            u[q] += alpha * p[q];
            r[q] -= alpha * ap[q];
            rr_next += r[q] * r[q];
        }
        const double beta = rr_next / rr;
        for (std::size_t q = 0; q < n_unknowns; ++q) p[q] = r[q] + beta * p[q];
        rr = rr_next;
        ++iter;
    }

    HarmonicMeasureField field;
    field.strip_half_height = strip_half_height;
    field.slit_length = slit_length;
    field.truncation_length = truncation_length;
    field.mesh = mesh;
    field.nx = nx;
    field.ny = ny;
    field.iterations = iter;
    field.residual = std::sqrt(rr) / std::max(1.0, std::sqrt(bb));
    field.values.assign((nx + 1) * stride, 0.0);
    for (std::size_t i = 0; i <= nx; ++i)
        for (std::size_t j = 0; j <= ny; ++j) {
            const std::int64_t v = index[i * stride + j];
            if (v >= 0)
                field.values[i * stride + j] = u[static_cast<std::size_t>(v)];
            else
                field.values[i * stride + j] = is_slit(i, j) ? 1.0 : 0.0;
        }
    return field;
}

}  // namespace truncft
