#pragma once

// Monte-Carlo harness: noisy measurement generation, reconstruction error,
// error-vs-bandwidth sweeps, critical-bandwidth extraction and line fits,
// noise-scaling bounds and the error decomposition.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/rng.hpp"
#include "truncft/signals.hpp"
#include "truncft/transform.hpp"

namespace truncft {

/// Additive complex Gaussian noise of level delta; generation is a pure
/// function of (seed, cell, trial, sample index).
struct NoiseModel {
    double delta = 0.0;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    std::vector<int> k_list;
    std::vector<double> b_grid;         // ascending bandwidths
    std::vector<double> delta_list;
    double rate = 16.0;                 // M = ceil(rate * B)
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double e_cut = 0.5;
    std::size_t persistence = 5;        // grid points a down-crossing must hold for
    std::size_t threads = 0;            // 0 = hardware concurrency

    void validate() const {
        if (k_list.empty()) throw ValidationError("ExperimentConfig: k_list is empty");
        for (int k : k_list)
            if (k < 1) throw ValidationError("ExperimentConfig: mode indices must be >= 1");
        if (b_grid.empty()) throw ValidationError("ExperimentConfig: b_grid is empty");
        for (std::size_t i = 0; i < b_grid.size(); ++i) {
            if (b_grid[i] <= 0.0) throw ValidationError("ExperimentConfig: bandwidths must be positive");
            if (i > 0 && b_grid[i] <= b_grid[i - 1])
                throw ValidationError("ExperimentConfig: b_grid must be strictly ascending");
        }
        if (delta_list.empty()) throw ValidationError("ExperimentConfig: delta_list is empty");
        for (double d : delta_list)
            if (d < 0.0) throw ValidationError("ExperimentConfig: noise levels must be >= 0");
        if (rate <= 0.0) throw ValidationError("ExperimentConfig: rate must be positive");
        if (std::ceil(rate * b_grid.front()) < 2.0)
            throw ValidationError("ExperimentConfig: rate * min(B) must give at least 2 samples");
        if (trials < 1) throw ValidationError("ExperimentConfig: trials must be >= 1");
        if (e_cut <= 0.0) throw ValidationError("ExperimentConfig: e_cut must be positive");
    }
};

struct SweepCell {
    int k = 0;
    double bandwidth = 0.0;
    double delta = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(trials)
    std::size_t trials = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SweepCell> cells;  // k-major, then bandwidth, then delta
};

namespace detail {

inline std::uint64_t cell_stream(int k, double bandwidth, double delta) {
    return rng_key(static_cast<std::uint64_t>(k), std::bit_cast<std::uint64_t>(bandwidth),
                   std::bit_cast<std::uint64_t>(delta));
}

}  // namespace detail

/// The noise term delta*(eps_r + i eps_i) for one trial, sample by sample.
inline std::vector<cplx> generate_noise(std::size_t count, const NoiseModel& noise,
                                        std::uint64_t cell_stream, std::uint64_t trial) {
    std::vector<cplx> out(count, cplx(0.0, 0.0));
    if (noise.delta <= 0.0) return out;
    const std::uint64_t key = rng_key(noise.seed, cell_stream, trial);
    for (std::size_t m = 0; m < count; ++m) {
        const NormalPair g = rng_gauss_pair(key, m);
        out[m] = noise.delta * cplx(g.first, g.second);
    }
    return out;
}

/// g_m = (Ff_k)(xi_m) + delta*(eps_r + i eps_i), with the noiseless part
/// from the closed form. Deterministic given (seed, trial).
inline SpectralSamples generate_measurement(const EigenfunctionSpec& spec, const FrequencyGrid& grid,
                                            const NoiseModel& noise, std::uint64_t trial = 0) {
    SpectralSamples meas = closed_form_samples(spec, grid);
    if (noise.delta > 0.0) {
        const std::vector<cplx> eps =
            generate_noise(grid.sample_count, noise,
                           detail::cell_stream(spec.k, grid.bandwidth, noise.delta), trial);
        for (std::size_t m = 0; m < meas.values.size(); ++m) meas.values[m] += eps[m];
    }
    return meas;
}

/// E^rec = sqrt( (2/M) sum |rec_m - f_k(x_m)|^2 ) on the reconstruction's
/// own left-point nodes.
inline double reconstruction_error(const Reconstruction& recon, const EigenfunctionSpec& spec) {
    const std::size_t n = recon.size();
    if (n < 1) throw ValidationError("reconstruction_error: empty reconstruction");
    if (recon.a != -1.0 || recon.b != 1.0)
        throw ValidationError("reconstruction_error: reconstruction is not on the [-1,1] node convention");
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        acc += std::norm(recon.values[m] - eigenfunction_value(spec, recon.node(m)));
    return std::sqrt(2.0 / static_cast<double>(n) * acc);
}

namespace detail {

inline SweepCell run_cell(int k, double bandwidth, double delta, const ExperimentConfig& cfg) {
    const std::size_t m_count = static_cast<std::size_t>(std::ceil(cfg.rate * bandwidth));
    const FrequencyGrid grid = FrequencyGrid::with_count(bandwidth, m_count);
    const EigenfunctionSpec spec{k};
    const SpectralSamples noiseless = closed_form_samples(spec, grid);
    const std::uint64_t stream = cell_stream(k, bandwidth, delta);
    const NoiseModel noise{delta, cfg.seed};

    double sum = 0.0, sumsq = 0.0;
    SpectralSamples meas = noiseless;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (delta > 0.0) {
            const std::vector<cplx> eps = generate_noise(m_count, noise, stream, t);
            for (std::size_t m = 0; m < m_count; ++m) meas.values[m] = noiseless.values[m] + eps[m];
        }
        const double err = reconstruction_error(frft_inverse(meas, m_count), spec);
        sum += err;
        sumsq += err * err;
    }
    SweepCell cell;
    cell.k = k;
    cell.bandwidth = bandwidth;
    cell.delta = delta;
    cell.trials = cfg.trials;
    cell.mean_error = sum / static_cast<double>(cfg.trials);
    if (cfg.trials > 1) {
        const double var = std::max(0.0, (sumsq - sum * cell.mean_error) / static_cast<double>(cfg.trials - 1));
        cell.std_error = std::sqrt(var / static_cast<double>(cfg.trials));
    }
    return cell;
}

}  // namespace detail

/// Mean E^rec over independent trials for every (k, B, delta) cell. Cells
/// are computed in parallel; each cell accumulates its trials in index
/// order, so the report is bitwise deterministic for a given config.
inline ExperimentReport sweep_error_vs_bandwidth(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.config = config;

    struct CellSpec {
        int k;
        double bandwidth, delta;
    };
    std::vector<CellSpec> specs;
    for (int k : config.k_list)
        for (double bandwidth : config.b_grid)
            for (double delta : config.delta_list) specs.push_back({k, bandwidth, delta});
    report.cells.resize(specs.size());

    std::size_t n_threads = config.threads != 0 ? config.threads
                                                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, specs.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i)
            report.cells[i] = detail::run_cell(specs[i].k, specs[i].bandwidth, specs[i].delta, config);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1))
                    report.cells[i] = detail::run_cell(specs[i].k, specs[i].bandwidth, specs[i].delta, config);
            });
        for (auto& th : pool) th.join();
    }
    return report;
}

/// Mean-error curve of one (k, delta) series, in b_grid order.
inline std::vector<double> mean_error_curve(const ExperimentReport& report, int k, double delta) {
    std::vector<double> curve;
    for (double bandwidth : report.config.b_grid) {
        bool found = false;
        for (const SweepCell& cell : report.cells)
            if (cell.k == k && cell.delta == delta && cell.bandwidth == bandwidth) {
                curve.push_back(cell.mean_error);
                found = true;
                break;
            }
        if (!found) throw ValidationError("mean_error_curve: cell missing from the report");
    }
    return curve;
}

/// First grid bandwidth from which the mean error stays <= e_cut for
/// `persistence` consecutive grid points (clamped at the grid end);
/// +infinity when no such bandwidth exists. The persistence window filters
/// both single-point aliasing dips at small M and the noise-floor turn-up.
inline double critical_bandwidth(std::span<const double> means, std::span<const double> b_grid,
                                 double e_cut, std::size_t persistence = 5) {
    if (means.size() != b_grid.size())
        throw ValidationError("critical_bandwidth: curve and grid sizes differ");
    const std::size_t n = means.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t end = std::min(i + std::max<std::size_t>(persistence, 1), n);
        bool ok = true;
        for (std::size_t j = i; j < end; ++j)
            if (!(means[j] <= e_cut)) {
                ok = false;
                break;
            }
        if (ok) return b_grid[i];
    }
    return std::numeric_limits<double>::infinity();
}

/// Convenience form running the sweep for a single mode.
inline double critical_bandwidth(const EigenfunctionSpec& spec, double e_cut, double delta,
                                 ExperimentConfig config) {
    config.k_list = {spec.k};
    config.delta_list = {delta};
    config.e_cut = e_cut;
    const ExperimentReport report = sweep_error_vs_bandwidth(config);
    const std::vector<double> curve = mean_error_curve(report, spec.k, delta);
    return critical_bandwidth(curve, config.b_grid, e_cut, config.persistence);
}

struct LineFit {
    double slope = 0.0;
    double offset = 0.0;
};

/// Ordinary least squares through (k, B0) points; needs >= 3 finite points.
inline LineFit fit_critical_line(std::span<const std::pair<double, double>> points) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(y)) continue;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw ValidationError("fit_critical_line: need at least 3 finite points");
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    LineFit fit;
    fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    fit.offset = (sy - fit.slope * sx) / static_cast<double>(n);
    return fit;
}

// ---------------------------------------------------------------------------
// Noise scaling
// ---------------------------------------------------------------------------

struct NoiseBoundPoint {
    double bandwidth = 0.0;
    double noise_free_error = 0.0;
    double mean_error = 0.0;
    std::size_t trials = 0;
    std::size_t hard_bound_violations = 0;  // of E <= E_nf + sqrt(8) B ||eps||_inf
    double envelope_ratio = 0.0;            // (mean - noise-free) / (delta sqrt(B))
};

/// Per-trial hard bound and mean excess at a single bandwidth.
inline NoiseBoundPoint noise_error_bound_check(const EigenfunctionSpec& spec, double bandwidth,
                                               double delta, std::size_t trials, double rate = 16.0,
                                               std::uint64_t seed = 0) {
    if (trials < 1) throw ValidationError("noise_error_bound_check: trials must be >= 1");
    const std::size_t m_count = static_cast<std::size_t>(std::ceil(rate * bandwidth));
    const FrequencyGrid grid = FrequencyGrid::with_count(bandwidth, m_count);
    const SpectralSamples noiseless = closed_form_samples(spec, grid);
    const std::uint64_t stream = detail::cell_stream(spec.k, bandwidth, delta);
    const NoiseModel noise{delta, seed};

    NoiseBoundPoint point;
    point.bandwidth = bandwidth;
    point.trials = trials;
    point.noise_free_error = reconstruction_error(frft_inverse(noiseless, m_count), spec);

    double sum = 0.0;
    SpectralSamples meas = noiseless;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::vector<cplx> eps = generate_noise(m_count, noise, stream, t);
        double eps_inf = 0.0;
        for (std::size_t m = 0; m < m_count; ++m) {
            meas.values[m] = noiseless.values[m] + eps[m];
            eps_inf = std::max(eps_inf, std::abs(eps[m]));
        }
        const double err = reconstruction_error(frft_inverse(meas, m_count), spec);
        sum += err;
        const double hard = point.noise_free_error + std::sqrt(8.0) * bandwidth * eps_inf;
        if (err > hard * (1.0 + 1e-12)) ++point.hard_bound_violations;
    }
    point.mean_error = sum / static_cast<double>(trials);
    if (delta > 0.0)
        point.envelope_ratio = (point.mean_error - point.noise_free_error) / (delta * std::sqrt(bandwidth));
    return point;
}

struct NoiseBoundReport {
    std::vector<NoiseBoundPoint> points;
    double envelope_c = 0.0;  // smallest c with mean <= noise-free + c * delta * sqrt(B) everywhere
    bool all_hard_bounds_hold = true;
};

inline NoiseBoundReport noise_bound_sweep(const EigenfunctionSpec& spec, std::span<const double> b_values,
                                          double delta, std::size_t trials, double rate = 16.0,
                                          std::uint64_t seed = 0) {
    NoiseBoundReport report;
    for (double bandwidth : b_values) {
        report.points.push_back(noise_error_bound_check(spec, bandwidth, delta, trials, rate, seed));
        const NoiseBoundPoint& point = report.points.back();
        report.envelope_c = std::max(report.envelope_c, point.envelope_ratio);
        if (point.hard_bound_violations != 0) report.all_hard_bounds_hold = false;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Error decomposition
// ---------------------------------------------------------------------------

struct ErrorDecomposition {
    double truncation = 0.0;       // E_B: || f - F^{-1} F_B f || by fine reference quadrature
    double sampling = 0.0;         // E_h: fine-quadrature inversion vs spacing-h inversion
    double noise = 0.0;            // E_eps: mean || inverted pure-noise term ||
    double interp_residual = 0.0;  // E_I proxy: |E^rec - fine-grid norm of f - linear recon|
};

namespace detail {

inline double fine_l2_error_vs_signal(const Reconstruction& recon, const EigenfunctionSpec& spec) {
    return reconstruction_error(recon, spec);
}

}  // namespace detail

inline ErrorDecomposition error_decomposition(const EigenfunctionSpec& spec, double bandwidth,
                                              double spacing, double delta, std::size_t trials,
                                              std::uint64_t seed = 0) {
    const FrequencyGrid grid = FrequencyGrid::make(bandwidth, spacing);
    const std::size_t m_count = grid.sample_count;
    const std::size_t m_ref = std::max<std::size_t>(8 * m_count, 4096);
    const FrequencyGrid grid_ref = FrequencyGrid::with_count(bandwidth, m_ref);

    const SpectralSamples meas = closed_form_samples(spec, grid);
    const SpectralSamples meas_ref = closed_form_samples(spec, grid_ref);

    ErrorDecomposition out;

    // E_B against the fine reference quadrature, on the fine output nodes.
    const Reconstruction recon_ref = frft_inverse(meas_ref, m_ref);
    out.truncation = detail::fine_l2_error_vs_signal(recon_ref, spec);

    // E_h: both inversions evaluated on the same fine output nodes.
    const Reconstruction recon_h_on_ref = frft_inverse(meas, m_ref);
    double acc = 0.0;
    for (std::size_t j = 0; j < m_ref; ++j) acc += std::norm(recon_h_on_ref.values[j] - recon_ref.values[j]);
    out.sampling = std::sqrt(2.0 / static_cast<double>(m_ref) * acc);

    // E_eps: mean norm of the inverted pure-noise term.
    if (delta > 0.0 && trials > 0) {
        const std::uint64_t stream = detail::cell_stream(spec.k, bandwidth, delta);
        const NoiseModel noise{delta, seed};
        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            SpectralSamples pure{grid, generate_noise(m_count, noise, stream, t)};
            const Reconstruction rec = frft_inverse(pure, m_count);
            double nacc = 0.0;
            for (const cplx& z : rec.values) nacc += std::norm(z);
            sum += std::sqrt(2.0 / static_cast<double>(m_count) * nacc);
        }
        out.noise = sum / static_cast<double>(trials);
    }

    // E_I proxy: compare E^rec on the coarse nodes with the fine-grid norm of
    // f minus the piecewise-linear interpolant of the coarse reconstruction.
    const Reconstruction recon_h = frft_inverse(meas, m_count);
    const double erec_coarse = reconstruction_error(recon_h, spec);
    const double dx = 2.0 / static_cast<double>(m_count);
    double facc = 0.0;
    for (std::size_t j = 0; j < m_ref; ++j) {
        const double x = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(m_ref);
        const double pos = (x + 1.0) / dx;
        const std::size_t i0 = std::min(static_cast<std::size_t>(pos), m_count - 1);
        const double frac = pos - static_cast<double>(i0);
        const cplx interp = (i0 + 1 < m_count)
                                ? (1.0 - frac) * recon_h.values[i0] + frac * recon_h.values[i0 + 1]
                                : recon_h.values[i0];
        facc += std::norm(interp - eigenfunction_value(spec, x));
    }
    const double fine_norm = std::sqrt(2.0 / static_cast<double>(m_ref) * facc);
    out.interp_residual = std::abs(erec_coarse - fine_norm);
    return out;
}

}  // namespace truncft
