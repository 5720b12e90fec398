#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "truncft/experiments.hpp"

using namespace truncft;

TEST_CASE("noiseless measurements equal the closed-form samples") {
    const FrequencyGrid grid = FrequencyGrid::make(10.0, 0.25);
    const SpectralSamples meas = generate_measurement({4}, grid, {0.0, 123}, 0);
    const SpectralSamples closed = closed_form_samples({4}, grid);
    for (std::size_t m = 0; m < grid.sample_count; ++m)
        REQUIRE(meas.values[m] == closed.values[m]);
}

TEST_CASE("measurement generation is deterministic in the seed") {
    const FrequencyGrid grid = FrequencyGrid::make(5.0, 0.125);
    const SpectralSamples a = generate_measurement({3}, grid, {0.05, 42}, 7);
    const SpectralSamples b = generate_measurement({3}, grid, {0.05, 42}, 7);
    const SpectralSamples c = generate_measurement({3}, grid, {0.05, 43}, 7);
    double diff = 0.0;
    for (std::size_t m = 0; m < grid.sample_count; ++m) {
        REQUIRE(a.values[m] == b.values[m]);
        diff += std::abs(a.values[m] - c.values[m]);
    }
    REQUIRE(diff > 0.0);
}

TEST_CASE("noise has the requested first and second moments") {
    const std::size_t m_count = 10000;
    const double delta = 0.05;
    const std::vector<cplx> eps = generate_noise(m_count, {delta, 5}, 77, 0);
    double mean_re = 0.0, mean_im = 0.0, var_re = 0.0;
    for (const cplx& z : eps) {
        mean_re += z.real();
        mean_im += z.imag();
        var_re += z.real() * z.real();
    }
    mean_re /= m_count;
    mean_im /= m_count;
    var_re = var_re / m_count - mean_re * mean_re;
    const double band = 4.0 * delta / std::sqrt(static_cast<double>(m_count));
    REQUIRE(std::abs(mean_re) < band);
    REQUIRE(std::abs(mean_im) < band);
    REQUIRE(var_re == Catch::Approx(delta * delta).epsilon(0.10));
}

TEST_CASE("reconstruction error definition") {
    // exact samples give zero error
    Reconstruction exact;
    exact.values.resize(64);
    for (std::size_t m = 0; m < 64; ++m)
        exact.values[m] = eigenfunction_value({4}, exact.node(m));
    REQUIRE(reconstruction_error(exact, {4}) == 0.0);

    // the zero reconstruction scores the signal norm
    Reconstruction zero;
    zero.values.assign(256, cplx(0.0, 0.0));
    REQUIRE(std::abs(reconstruction_error(zero, {4}) - 1.0) <= 2.0 / 256.0);
}

TEST_CASE("noiseless pipeline error past the critical bandwidth") {
    const double b = 4.0 * kPi;
    const std::size_t m_count = static_cast<std::size_t>(std::ceil(16.0 * b));
    const FrequencyGrid grid = FrequencyGrid::with_count(b, m_count);
    const Reconstruction rec = frft_inverse(closed_form_samples({4}, grid), m_count);
    REQUIRE(reconstruction_error(rec, {4}) < 0.1);
}

TEST_CASE("sweep report layout and determinism") {
    ExperimentConfig cfg;
    cfg.k_list = {4};
    cfg.b_grid = {1.0, 1.5};
    cfg.delta_list = {0.01};
    cfg.trials = 8;
    cfg.seed = 11;
    const ExperimentReport a = sweep_error_vs_bandwidth(cfg);
    REQUIRE(a.cells.size() == 2);
    REQUIRE(a.cells[0].bandwidth == 1.0);
    REQUIRE(a.cells[1].bandwidth == 1.5);
    REQUIRE(a.cells[0].trials == 8);

    cfg.threads = 2;
    const ExperimentReport b = sweep_error_vs_bandwidth(cfg);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        REQUIRE(a.cells[i].mean_error == b.cells[i].mean_error);
        REQUIRE(a.cells[i].std_error == b.cells[i].std_error);
    }
}

TEST_CASE("standard error shrinks with the trial count") {
    ExperimentConfig cfg;
    cfg.k_list = {2};
    cfg.b_grid = {8.0};
    cfg.delta_list = {0.05};
    cfg.seed = 3;
    cfg.trials = 100;
    const double se100 = sweep_error_vs_bandwidth(cfg).cells[0].std_error;
    cfg.trials = 400;
    const ExperimentReport rep400 = sweep_error_vs_bandwidth(cfg);
    const double se400 = rep400.cells[0].std_error;
    REQUIRE(se400 < se100);
    REQUIRE(se400 / se100 == Catch::Approx(0.5).margin(0.2));
    REQUIRE(rep400.cells[0].mean_error > 0.0);
}

TEST_CASE("critical bandwidth selection") {
    const std::vector<double> grid = {1, 2, 3, 4, 5, 6, 7, 8};

    // clean down-crossing at B = 4
    const std::vector<double> clean = {1.0, 0.9, 0.7, 0.4, 0.3, 0.3, 0.3, 0.3};
    REQUIRE(critical_bandwidth(clean, grid, 0.5) == 4.0);

    // a single-point aliasing dip must not count
    const std::vector<double> dip = {0.01, 0.9, 0.7, 0.4, 0.3, 0.3, 0.3, 0.3};
    REQUIRE(critical_bandwidth(dip, grid, 0.5) == 4.0);

    // never below the cutoff: infinity
    const std::vector<double> high = {1.0, 0.9, 0.8, 0.9, 0.8, 0.9, 0.8, 0.9};
    REQUIRE(std::isinf(critical_bandwidth(high, grid, 0.5)));

    // looser cutoffs cross earlier
    REQUIRE(critical_bandwidth(clean, grid, 0.75) <= critical_bandwidth(clean, grid, 0.5));

    // persistence window clamps at the end of the grid
    const std::vector<double> tail = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.4, 0.4};
    REQUIRE(critical_bandwidth(tail, grid, 0.5) == 7.0);
}

TEST_CASE("critical bandwidth of f_4 sits near its frequency number") {
    ExperimentConfig cfg;
    cfg.k_list = {4};
    cfg.delta_list = {0.0};
    cfg.trials = 1;
    for (double b = 0.5; b <= 12.0 + 1e-9; b += 0.5) cfg.b_grid.push_back(b);
    const double b0 = critical_bandwidth({4}, 0.5, 0.0, cfg);
    REQUIRE(b0 >= 2.0 * kPi - 1.0);
    REQUIRE(b0 <= 2.0 * kPi + 1.0);
}

TEST_CASE("line fit recovers exact points") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 2; k <= 12; ++k)
        pts.emplace_back(static_cast<double>(k), kPi / 2.0 * static_cast<double>(k) + 0.3);
    const LineFit fit = fit_critical_line(pts);
    REQUIRE(fit.slope == Catch::Approx(kPi / 2.0).epsilon(1e-12));
    REQUIRE(fit.offset == Catch::Approx(0.3).epsilon(1e-9));

    // infinite points are skipped; fewer than 3 finite points is an error
    pts.resize(2);
    pts.emplace_back(5.0, std::numeric_limits<double>::infinity());
    REQUIRE_THROWS_AS(fit_critical_line(std::span<const std::pair<double, double>>(pts)),
                      ValidationError);
}

TEST_CASE("noise bound: delta = 0 collapses to the noise-free error") {
    const NoiseBoundPoint p = noise_error_bound_check({4}, 8.0, 0.0, 5);
    REQUIRE(p.mean_error == p.noise_free_error);
    REQUIRE(p.hard_bound_violations == 0);
}

TEST_CASE("mean error grows like sqrt(B) past the critical bandwidth") {
    // regress the delta = 0.05 mean-error curve for f_15 against sqrt(B)
    // on the noise-dominated range [2 omega, 4 omega]
    const int k = 15;
    const double omega = static_cast<double>(k) * kPi / 2.0;
    ExperimentConfig cfg;
    cfg.k_list = {k};
    cfg.delta_list = {0.05};
    cfg.trials = 25;
    cfg.seed = 31;
    for (int i = 0; i < 12; ++i)
        cfg.b_grid.push_back(2.0 * omega + 2.0 * omega * static_cast<double>(i) / 11.0);
    const ExperimentReport rep = sweep_error_vs_bandwidth(cfg);
    const std::vector<double> means = mean_error_curve(rep, k, 0.05);

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        const double x = std::sqrt(cfg.b_grid[i]);
        sx += x;
        sy += means[i];
        sxx += x * x;
        sxy += x * means[i];
        syy += means[i] * means[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    REQUIRE(slope > 0.0);
    REQUIRE(r * r > 0.8);
}

TEST_CASE("reconstruction cannot beat the injected noise") {
    // far past the critical bandwidth the mean error stays above delta/2
    const double delta = 0.05;
    ExperimentConfig cfg;
    cfg.k_list = {4};
    cfg.b_grid = {8.0 * 2.0 * kPi};
    cfg.delta_list = {delta};
    cfg.trials = 20;
    cfg.seed = 13;
    const ExperimentReport rep = sweep_error_vs_bandwidth(cfg);
    REQUIRE(rep.cells[0].mean_error >= 0.5 * delta);
}

TEST_CASE("noise bound holds per trial") {
    const NoiseBoundPoint p = noise_error_bound_check({6}, 12.0, 0.05, 50, 16.0, 9);
    REQUIRE(p.hard_bound_violations == 0);
    REQUIRE(p.mean_error > p.noise_free_error);
    REQUIRE(p.envelope_ratio > 0.0);
    REQUIRE(p.envelope_ratio < 3.0);
}

TEST_CASE("error decomposition") {
    // delta = 0 has no noise term
    const ErrorDecomposition base = error_decomposition({4}, 3.0, 3.0 / 32.0, 0.0, 4);
    REQUIRE(base.noise == 0.0);

    // halving h roughly halves the sampling error (first-order rule; B = 3
    // keeps the band edge away from the zeros of the transform)
    const ErrorDecomposition fine = error_decomposition({4}, 3.0, 3.0 / 64.0, 0.0, 4);
    REQUIRE(base.sampling / fine.sampling > 1.5);
    REQUIRE(base.sampling / fine.sampling < 3.0);

    // the interpolation residual shrinks with h as well
    REQUIRE(fine.interp_residual <= base.interp_residual + 1e-9);

    // truncation error collapses past the critical bandwidth
    const ErrorDecomposition narrow = error_decomposition({4}, kPi, kPi / 32.0, 0.0, 4);
    const ErrorDecomposition wide = error_decomposition({4}, 4.0 * kPi, kPi / 32.0, 0.0, 4);
    REQUIRE(narrow.truncation / wide.truncation >= 5.0);

    // with noise, the noise term is positive
    const ErrorDecomposition noisy = error_decomposition({4}, kPi, kPi / 32.0, 0.05, 8, 4);
    REQUIRE(noisy.noise > 0.0);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.k_list = {4};
    cfg.b_grid = {1.0, 2.0};
    cfg.delta_list = {0.0};
    cfg.trials = 1;
    REQUIRE_NOTHROW(cfg.validate());

    ExperimentConfig bad = cfg;
    bad.b_grid = {2.0, 1.0};
    REQUIRE_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.k_list = {0};
    REQUIRE_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.trials = 0;
    REQUIRE_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.rate = 0.5;
    REQUIRE_THROWS_AS(bad.validate(), ValidationError);
}
