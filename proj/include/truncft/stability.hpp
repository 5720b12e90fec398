#pragma once

// Explicit stability constants for recovering f on [-1,1] from its
// truncated Fourier transform, and numerical checkers for the
// inequalities behind them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/harmonic.hpp"
#include "truncft/signals.hpp"
#include "truncft/transform.hpp"

namespace truncft {

/// Parameters for the small-truncation stability chain. B0 is the reference
/// bandwidth at which the large-truncation bound holds, B < B0 the actual
/// truncation, L the half-strip height, gamma > 1 the margin factor.
struct StabilityParams {
    double strip_half_height = 1.0;  // L
    double reference_bandwidth = 0.0;  // B0
    double bandwidth = 0.0;            // B
    double gamma = 2.0;
    FrequencyNumber omega{kPi / 2.0};

    void validate() const {
        if (gamma <= 1.0) throw ValidationError("StabilityParams: gamma must be > 1");
        if (strip_half_height <= 0.0) throw ValidationError("StabilityParams: L must be positive");
        if (bandwidth <= 0.0 || reference_bandwidth <= bandwidth)
            throw ValidationError("StabilityParams: need 0 < B < B0");
        if (reference_bandwidth < std::sqrt(gamma) * omega.omega * (1.0 - 1e-12))
            throw ValidationError("StabilityParams: need B0 >= sqrt(gamma) * omega");
    }
};

/// (1 - omega^2/B^2)^{-1/2}; the bound is vacuous for B <= omega.
inline double large_truncation_factor(double omega, double bandwidth) {
    if (omega <= 0.0) throw ValidationError("large_truncation_factor: omega must be positive");
    if (bandwidth <= omega)
        throw ValidationError("large_truncation_factor: bound is vacuous for B <= omega");
    return 1.0 / std::sqrt(1.0 - (omega / bandwidth) * (omega / bandwidth));
}

namespace detail {

// log(e^x - 1) without overflow.
inline double log_expm1(double x) {
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

}  // namespace detail

/// eta = (2/pi) atan( (e^B-1)^{pi/(2L)} / sqrt((e^B0-1)^{pi/L} - (e^B-1)^{pi/L}) ),
/// evaluated in log space so large B0, B stay finite.
inline double eta(double strip_half_height, double reference_bandwidth, double bandwidth) {
    if (strip_half_height <= 0.0) throw ValidationError("eta: L must be positive");
    if (bandwidth <= 0.0 || bandwidth >= reference_bandwidth)
        throw ValidationError("eta: need 0 < B < B0");
    const double p = kPi / strip_half_height;
    const double gap = detail::log_expm1(reference_bandwidth) - detail::log_expm1(bandwidth);
    // atan argument = exp(-p*gap/2) / sqrt(1 - exp(-p*gap))
    const double arg = std::exp(-0.5 * p * gap) / std::sqrt(-std::expm1(-p * gap));
    return (2.0 / kPi) * std::atan(arg);
}

inline double eta(const StabilityParams& params) {
    return eta(params.strip_half_height, params.reference_bandwidth, params.bandwidth);
}

/// c = (B^{1/4} / pi^{1/4} + 2/sqrt(B))^2, the sup-norm constant of the
/// interpolation inequality applied to the transform on [0,B].
inline double gn_constant(double bandwidth) {
    if (bandwidth <= 0.0) throw ValidationError("gn_constant: B must be positive");
    const double root = std::pow(bandwidth / kPi, 0.25) + 2.0 / std::sqrt(bandwidth);
    return root * root;
}

struct ConstantResult {
    double value = 0.0;      // +infinity when overflowed
    double log_value = 0.0;  // always finite
    bool overflow = false;
};

/// k = c * (2 B0 / (1 - 1/gamma))^{1/w} * e^{2L(1-w)/w} for an exponent
/// w in (0,1] (harmonic measure or its eta lower bound). Computed in log
/// space; overflow is reported as +infinity with a flag.
inline ConstantResult small_truncation_constant(const StabilityParams& params, double exponent) {
    params.validate();
    if (!(exponent > 0.0) || exponent > 1.0)
        throw ValidationError("small_truncation_constant: exponent must lie in (0, 1]");
    const double log_c = std::log(gn_constant(params.bandwidth));
    const double log_base = std::log(2.0 * params.reference_bandwidth / (1.0 - 1.0 / params.gamma));
    const double log_k = log_c + log_base / exponent +
                         2.0 * params.strip_half_height * (1.0 - exponent) / exponent;
    ConstantResult out;
    out.log_value = log_k;
    if (log_k >= std::log(std::numeric_limits<double>::max())) {
        out.value = std::numeric_limits<double>::infinity();
        out.overflow = true;
    } else {
        out.value = std::exp(log_k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg inequality checker
// ---------------------------------------------------------------------------

struct GnReport {
    double lhs = 0.0;       // discrete sup norm
    double l2 = 0.0;        // discrete L2 norm
    double deriv_l2 = 0.0;  // discrete L2 norm of the derivative
    double rhs = 0.0;       // sqrt(2) ||u||^{1/2} ||u'||^{1/2} + sqrt(8)/sqrt(B) ||u||
    bool holds = false;
};

/// Check ||u||_inf <= sqrt(2) ||u||^{1/2} ||u_x||^{1/2} + sqrt(8)/sqrt(B) ||u||
/// on samples at the left-point nodes 0, d, ..., (n-1)d of [0, B], B = n*d.
/// Central differences in the interior, one-sided at the ends.
inline GnReport gn_inequality_check(std::span<const cplx> samples, double spacing) {
    const std::size_t n = samples.size();
    if (n < 3) throw ValidationError("gn_inequality_check: need at least 3 samples");
    if (spacing <= 0.0) throw ValidationError("gn_inequality_check: spacing must be positive");
    const double domain = spacing * static_cast<double>(n);

    GnReport rep;
    double sup = 0.0, acc = 0.0, dacc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        sup = std::max(sup, std::abs(samples[m]));
        acc += std::norm(samples[m]);
        cplx d;
        if (m == 0)
            d = (samples[1] - samples[0]) / spacing;
        else if (m == n - 1)
            d = (samples[n - 1] - samples[n - 2]) / spacing;
        else
            d = (samples[m + 1] - samples[m - 1]) / (2.0 * spacing);
        dacc += std::norm(d);
    }
    rep.lhs = sup;
    rep.l2 = std::sqrt(spacing * acc);
    rep.deriv_l2 = std::sqrt(spacing * dacc);
    rep.rhs = std::sqrt(2.0) * std::sqrt(rep.l2) * std::sqrt(rep.deriv_l2) +
              std::sqrt(8.0) / std::sqrt(domain) * rep.l2;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

inline GnReport gn_inequality_check(std::span<const double> samples, double spacing) {
    std::vector<cplx> tmp(samples.begin(), samples.end());
    return gn_inequality_check(std::span<const cplx>(tmp), spacing);
}

// ---------------------------------------------------------------------------
// Two-constants bound
// ---------------------------------------------------------------------------

struct TwoConstantsWitness {
    double sup_bound = 0.0;   // M >= sup |fhat| on the strip
    double slit_bound = 0.0;  // m >= sup |fhat| on the slit [0,B]
    double measure = 0.0;     // w at the point the stability chain evaluates

    void validate() const {
        if (!(slit_bound > 0.0) || slit_bound > sup_bound)
            throw ValidationError("TwoConstantsWitness: need 0 < m <= M");
        if (measure < 0.0 || measure > 1.0)
            throw ValidationError("TwoConstantsWitness: measure must lie in [0,1]");
    }
};

/// Sup of |Ff_k| over the slit [0,B] by dense sampling of the closed form.
inline double slit_sup_bound(const EigenfunctionSpec& spec, double slit_length,
                             std::size_t n_samples = 16384) {
    double sup = 0.0;
    for (std::size_t m = 0; m <= n_samples; ++m) {
        const double xi = slit_length * static_cast<double>(m) / static_cast<double>(n_samples);
        sup = std::max(sup, std::abs(forward_eigenfunction_transform(spec, cplx(xi, 0.0))));
    }
    return sup;
}

/// Global bound M = e^L / sqrt(pi) * ||f|| on |Ff| over |Im z| <= L
/// (||f_k|| = 1 for the eigenfunctions).
inline double strip_sup_bound(double strip_half_height, double signal_norm = 1.0) {
    return std::exp(strip_half_height) / std::sqrt(kPi) * signal_norm;
}

struct TwoConstantsReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();  // min(bound - |fhat|)
    bool holds = false;
};

/// Verify |Ff_k(z)| <= m^{w(z)} M^{1-w(z)} at the given points, with w(z)
/// sampled from the finite-difference field. The exponent is reduced by
/// `measure_budget` to absorb the FD error (m <= M, so smaller w is the
/// safe direction).
inline TwoConstantsReport two_constants_check(const EigenfunctionSpec& spec,
                                              const TwoConstantsWitness& witness,
                                              std::span<const cplx> points,
                                              const HarmonicMeasureField& field,
                                              double measure_budget) {
    witness.validate();
    TwoConstantsReport rep;
    for (const cplx& z : points) {
        const double w_raw = field.sample(z.real(), z.imag());
        const double w = std::min(1.0, std::max(0.0, w_raw - measure_budget));
        const double bound = std::pow(witness.slit_bound, w) * std::pow(witness.sup_bound, 1.0 - w);
        const double value = std::abs(forward_eigenfunction_transform(spec, z));
        rep.min_margin = std::min(rep.min_margin, bound - value);
        if (value > bound) ++rep.violations;
        ++rep.checked;
    }
    rep.holds = rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// eta vs harmonic measure, and the empirical stability inequality
// ---------------------------------------------------------------------------

struct EtaMeasureReport {
    double eta = 0.0;
    double measure = 0.0;  // w_L(B0, B) from the FD solve
    double mesh = 0.0;
    bool eta_le_measure = false;
};

/// Compare the closed-form exponent eta with the FD harmonic measure at
/// z = B0. The comparison eta <= w is only claimed for 0 < L < pi/2; the
/// FD value gets a 5*mesh error budget.
inline EtaMeasureReport eta_vs_measure_check(double strip_half_height, double reference_bandwidth,
                                             double bandwidth, double mesh = 1.0 / 64.0,
                                             const HarmonicSolveOptions& options = {}) {
    if (strip_half_height <= 0.0 || strip_half_height >= kPi / 2.0)
        throw ValidationError("eta_vs_measure_check: need 0 < L < pi/2");
    if (bandwidth <= 0.0 || bandwidth >= reference_bandwidth)
        throw ValidationError("eta_vs_measure_check: need 0 < B < B0");
    const double x_max =
        default_truncation_length(strip_half_height, bandwidth, mesh, reference_bandwidth);
    const HarmonicMeasureField field =
        solve_harmonic_measure(strip_half_height, bandwidth, x_max, mesh, options);
    EtaMeasureReport rep;
    rep.eta = eta(strip_half_height, reference_bandwidth, bandwidth);
    rep.measure = field.sample(reference_bandwidth, 0.0);
    rep.mesh = mesh;
    rep.eta_le_measure = rep.eta <= rep.measure + 5.0 * mesh;
    return rep;
}

struct EmpiricalStabilityReport {
    double lhs = 0.0;  // ||f_k||
    double rhs = 0.0;  // k_{L,B0,B}(eta) * ||F_B f_k||
    double eta_used = 0.0;
    bool overflow = false;
    bool holds = false;
};

/// Check ||f_k|| <= k_{L,B0,B} ||F_B f_k|| on discrete data, with the
/// constant taken through the eta exponent and the spectral norm from
/// closed-form samples.
inline EmpiricalStabilityReport empirical_stability_check(const EigenfunctionSpec& spec,
                                                          const StabilityParams& params,
                                                          std::size_t n_samples = 4096) {
    params.validate();
    EmpiricalStabilityReport rep;
    rep.lhs = l2_norm(eval_eigenfunction(spec, n_samples));
    rep.eta_used = eta(params);
    const ConstantResult constant = small_truncation_constant(params, rep.eta_used);
    const FrequencyGrid grid = FrequencyGrid::with_count(params.bandwidth, n_samples);
    const double meas_norm = spectral_l2_norm(closed_form_samples(spec, grid));
    rep.overflow = constant.overflow;
    rep.rhs = constant.overflow ? std::numeric_limits<double>::infinity() : constant.value * meas_norm;
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

}  // namespace truncft
