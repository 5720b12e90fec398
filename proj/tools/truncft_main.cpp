// truncft - command line front end for the truncated-Fourier-transform
// library: forward/inverse transforms, stability constants, harmonic
// measure fields, operator spectra and the Monte-Carlo experiment harness.
//
// Exit codes: 0 success, 2 usage, 3 validation, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "truncft/truncft.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace truncft;

namespace {

struct Emitter {
    fs::path out_dir;
    std::string command;
    ordered_json config;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    fs::path resolve(const std::string& name) {
        fs::create_directories(out_dir);
        const fs::path p = out_dir / name;
        outputs.push_back(p.string());
        return p;
    }

    void write_manifest() {
        ordered_json manifest;
        manifest["command"] = command;
        manifest["version"] = kVersion;
        manifest["seed"] = seed;
        manifest["config"] = config;
        manifest["outputs"] = outputs;
        manifest["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const fs::path p = out_dir / (command + "_manifest.json");
        std::ofstream out(p);
        out << manifest.dump(2) << '\n';
    }
};

fs::path default_out_dir() {
    if (const char* env = std::getenv("TRUNCFT_OUT_DIR")) return env;
    return ".";
}

double snap_to_mesh(double value, double mesh, const std::string& what) {
    const double ratio = value / mesh;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError(what + " = " + std::to_string(value) +
                              " is not a multiple of the mesh " + std::to_string(mesh));
    return rounded * mesh;
}

// ---------------------------------------------------------------------------

int cmd_transform(int k, double bandwidth, double spacing, bool closed_form, std::size_t n_samples,
                  const std::string& output, Emitter em) {
    em.command = "transform";
    em.config = {{"k", k}, {"bandwidth", bandwidth}, {"spacing", spacing},
                 {"closed_form", closed_form}, {"n_samples", n_samples}};
    const FrequencyGrid grid = FrequencyGrid::make(bandwidth, spacing);
    const EigenfunctionSpec spec{k};
    const SpectralSamples samples =
        closed_form ? closed_form_samples(spec, grid)
                    : forward_truncated(eval_eigenfunction(spec, n_samples), grid);
    write_spectral_csv(em.resolve(output).string(), samples);
    em.write_manifest();
    std::cout << "wrote " << samples.values.size() << " spectral samples\n";
    return 0;
}

int cmd_reconstruct(const std::string& input, std::size_t n_out, const std::string& output, Emitter em) {
    em.command = "reconstruct";
    em.config = {{"input", input}, {"n_out", n_out}};
    const SpectralSamples meas = read_spectral_csv(input);
    const std::size_t n = n_out == 0 ? meas.grid.sample_count : n_out;
    const Reconstruction rec = frft_inverse(meas, n);
    write_reconstruction_csv(em.resolve(output).string(), rec);
    em.write_manifest();
    std::cout << "wrote " << n << " reconstruction samples\n";
    return 0;
}

int cmd_stability(double strip_l, double b0, double b, double gamma, double mesh) {
    if (gamma <= 1.0) throw ValidationError("--gamma must be > 1");
    if (!(b > 0.0) || !(b0 > b)) throw ValidationError("need 0 < B < B0 (strict)");
    if (!(strip_l > 0.0)) throw ValidationError("--L must be positive");

    StabilityParams params;
    params.strip_half_height = strip_l;
    params.reference_bandwidth = b0;
    params.bandwidth = b;
    params.gamma = gamma;
    params.omega = FrequencyNumber{b0 / std::sqrt(gamma)};

    const double eta_value = eta(params);
    const ConstantResult k_eta = small_truncation_constant(params, eta_value);

    const double l_fd = snap_to_mesh(strip_l, mesh, "--L");
    const double b_fd = snap_to_mesh(b, mesh, "--B");
    const double x_max = default_truncation_length(l_fd, b_fd, mesh, b0);
    const HarmonicMeasureField field = solve_harmonic_measure(l_fd, b_fd, x_max, mesh);
    const double w_fd = field.sample(b0, 0.0);

    ConstantResult k_w;
    if (w_fd > 0.0) {
        k_w = small_truncation_constant(params, std::min(w_fd, 1.0));
    } else {
        k_w.value = std::numeric_limits<double>::infinity();
        k_w.log_value = std::numeric_limits<double>::infinity();
        k_w.overflow = true;
    }

    ordered_json out;
    out["L"] = strip_l;
    out["B0"] = b0;
    out["B"] = b;
    out["gamma"] = gamma;
    out["mesh"] = mesh;
    out["c"] = gn_constant(b);
    out["eta"] = eta_value;
    out["w_fd"] = w_fd;
    out["k_eta"] = k_eta.overflow ? ordered_json("inf") : ordered_json(k_eta.value);
    out["k_w"] = k_w.overflow ? ordered_json("inf") : ordered_json(k_w.value);
    out["log_k_eta"] = k_eta.log_value;
    out["log_k_w"] = k_w.log_value;
    out["k_eta_overflow"] = k_eta.overflow;
    out["k_w_overflow"] = k_w.overflow;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_harmonic(double strip_l, double slit_b, double x_max, double mesh, const std::string& prefix,
                 Emitter em) {
    em.command = "harmonic-measure";
    const double l_fd = snap_to_mesh(strip_l, mesh, "--L");
    const double b_fd = snap_to_mesh(slit_b, mesh, "--B");
    if (x_max <= 0.0) x_max = default_truncation_length(l_fd, b_fd, mesh);
    em.config = {{"L", l_fd}, {"B", b_fd}, {"xmax", x_max}, {"mesh", mesh}};
    const HarmonicMeasureField field = solve_harmonic_measure(l_fd, b_fd, x_max, mesh);
    write_field_csv(em.resolve(prefix + ".csv").string(), field);
    write_heatmap_svg(em.resolve(prefix + ".svg").string(), field);
    em.write_manifest();
    std::cout << "solved " << field.nx + 1 << "x" << field.ny + 1 << " nodes in " << field.iterations
              << " iterations, residual " << field.residual << '\n';
    return 0;
}

int cmd_spectrum(double bandwidth, std::size_t n, const std::string& prefix, Emitter em) {
    em.command = "spectrum";
    em.config = {{"bandwidth", bandwidth}, {"n", n}};
    const OperatorMatrix op = build_operator(bandwidth, n, n);
    const std::vector<double> sigmas = singular_values(op);
    write_sigma_csv(em.resolve(prefix + ".csv").string(), sigmas);

    SvgSeries series;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (sigmas[i] <= 1e-16) break;
        series.x.push_back(static_cast<double>(i + 1));
        series.y.push_back(sigmas[i]);
    }
    series.label = "sigma";
    write_line_plot_svg(em.resolve(prefix + ".svg").string(), {series},
                        {"singular values of the truncated Fourier transform", "index", "sigma", true});
    em.write_manifest();
    const DecayFit fit = decay_fit(sigmas, bandwidth);
    std::cout << "plateau_count " << fit.plateau_count << ", decay_rate " << fmt17(fit.decay_rate)
              << '\n';
    return 0;
}

ordered_json config_json(const ExperimentConfig& cfg, const std::vector<double>& e_cuts) {
    ordered_json j;
    j["k_list"] = cfg.k_list;
    j["b_grid_min"] = cfg.b_grid.front();
    j["b_grid_max"] = cfg.b_grid.back();
    j["b_grid_points"] = cfg.b_grid.size();
    j["delta_list"] = cfg.delta_list;
    j["rate"] = cfg.rate;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["e_cut_list"] = e_cuts;
    j["persistence"] = cfg.persistence;
    return j;
}

int cmd_sweep(const std::string& config_path, std::int64_t seed_override, Emitter em) {
    em.command = "sweep";
    SweepFileConfig cfg = parse_config_file(config_path);
    if (seed_override >= 0) cfg.experiment.seed = static_cast<std::uint64_t>(seed_override);
    em.seed = cfg.experiment.seed;
    em.config = config_json(cfg.experiment, cfg.e_cut_list);

    const ExperimentReport report = sweep_error_vs_bandwidth(cfg.experiment);
    write_report_csv(em.resolve("sweep.csv").string(), report);

    ordered_json jr;
    jr["config"] = em.config;
    jr["cells"] = ordered_json::array();
    for (const SweepCell& cell : report.cells)
        jr["cells"].push_back({{"k", cell.k}, {"B", cell.bandwidth}, {"delta", cell.delta},
                               {"mean_err", cell.mean_error}, {"stderr", cell.std_error},
                               {"trials", cell.trials}});
    {
        std::ofstream out(em.resolve("sweep.json").string());
        out << jr.dump(2) << '\n';
    }

    const char* palette[] = {"#1f6fb4", "#d1495b", "#3a7d44", "#7d3ac1", "#c77d1e", "#3aa9c7"};
    std::vector<SvgSeries> series;
    std::size_t color = 0;
    for (int k : cfg.experiment.k_list)
        for (double delta : cfg.experiment.delta_list) {
            SvgSeries s;
            s.x = cfg.experiment.b_grid;
            s.y = mean_error_curve(report, k, delta);
            s.color = palette[color++ % 6];
            s.label = "k=" + std::to_string(k) + " delta=" + fmt17(delta);
            series.push_back(std::move(s));
        }
    write_line_plot_svg(em.resolve("sweep.svg").string(), series,
                        {"reconstruction error vs bandwidth", "B", "mean E^rec", true});
    em.write_manifest();
    std::cout << "wrote " << report.cells.size() << " sweep cells\n";
    return 0;
}

int cmd_critical(const std::string& config_path, std::int64_t seed_override, Emitter em) {
    em.command = "critical";
    SweepFileConfig cfg = parse_config_file(config_path);
    if (seed_override >= 0) cfg.experiment.seed = static_cast<std::uint64_t>(seed_override);
    em.seed = cfg.experiment.seed;
    em.config = config_json(cfg.experiment, cfg.e_cut_list);

    const ExperimentReport report = sweep_error_vs_bandwidth(cfg.experiment);

    std::ofstream csv(em.resolve("critical.csv").string());
    csv << "k,delta,e_cut,B0\n";
    ordered_json fits = ordered_json::array();
    std::vector<SvgSeries> series;
    const char* palette[] = {"#1f6fb4", "#d1495b", "#3a7d44", "#7d3ac1", "#c77d1e", "#3aa9c7"};
    std::size_t color = 0;

    for (double delta : cfg.experiment.delta_list)
        for (double e_cut : cfg.e_cut_list) {
            std::vector<std::pair<double, double>> points;
            SvgSeries scatter;
            scatter.points_only = true;
            scatter.color = palette[color % 6];
            scatter.label = "delta=" + fmt17(delta) + " e_cut=" + fmt17(e_cut);
            for (int k : cfg.experiment.k_list) {
                const std::vector<double> curve = mean_error_curve(report, k, delta);
                const double b0 = critical_bandwidth(curve, cfg.experiment.b_grid, e_cut,
                                                     cfg.experiment.persistence);
                csv << k << ',' << fmt17(delta) << ',' << fmt17(e_cut) << ',' << fmt17(b0) << '\n';
                std::cout << "k=" << k << " delta=" << delta << " e_cut=" << e_cut << " B0=" << fmt17(b0)
                          << '\n';
                points.emplace_back(static_cast<double>(k), b0);
                if (std::isfinite(b0)) {
                    scatter.x.push_back(static_cast<double>(k));
                    scatter.y.push_back(b0);
                }
            }
            ordered_json entry = {{"delta", delta}, {"e_cut", e_cut}};
            if (scatter.x.size() >= 3) {
                const LineFit fit = fit_critical_line(points);
                entry["slope"] = fit.slope;
                entry["offset"] = fit.offset;
                SvgSeries line;
                line.color = scatter.color;
                line.dashed = true;
                for (double kk : {scatter.x.front(), scatter.x.back()}) {
                    line.x.push_back(kk);
                    line.y.push_back(fit.slope * kk + fit.offset);
                }
                series.push_back(std::move(line));
                std::cout << "  fit: B0 = " << fmt17(fit.slope) << " * k + " << fmt17(fit.offset) << '\n';
            }
            fits.push_back(std::move(entry));
            series.push_back(std::move(scatter));
            ++color;
        }
    csv.close();
    {
        std::ofstream out(em.resolve("critical_fits.json").string());
        ordered_json j;
        j["config"] = em.config;
        j["fits"] = fits;
        out << j.dump(2) << '\n';
    }
    write_line_plot_svg(em.resolve("critical.svg").string(), series,
                        {"critical bandwidth vs mode index", "k", "B0", false});
    em.write_manifest();
    return 0;
}

int cmd_noise_bound(int k, double delta, double b_min, double b_max, std::size_t points,
                    std::size_t trials, double rate, Emitter em) {
    em.command = "noise-bound";
    const double omega = static_cast<double>(k) * kPi / 2.0;
    if (b_min <= 0.0) b_min = omega;
    if (b_max <= 0.0) b_max = 4.0 * omega;
    if (b_max <= b_min) throw ValidationError("need --b-min < --b-max");
    if (points < 2) throw ValidationError("need --points >= 2");
    em.config = {{"k", k}, {"delta", delta}, {"b_min", b_min}, {"b_max", b_max},
                 {"points", points}, {"trials", trials}, {"rate", rate}};

    std::vector<double> bs(points);
    for (std::size_t i = 0; i < points; ++i)
        bs[i] = b_min + (b_max - b_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    const NoiseBoundReport report = noise_bound_sweep({k}, bs, delta, trials, rate, em.seed);

    std::ofstream csv(em.resolve("noise_bound.csv").string());
    csv << "B,noise_free_err,mean_err,hard_bound_violations,trials\n";
    SvgSeries mean_s, nf_s, overlay;
    for (const NoiseBoundPoint& p : report.points) {
        csv << fmt17(p.bandwidth) << ',' << fmt17(p.noise_free_error) << ',' << fmt17(p.mean_error)
            << ',' << p.hard_bound_violations << ',' << p.trials << '\n';
        mean_s.x.push_back(p.bandwidth);
        mean_s.y.push_back(p.mean_error);
        nf_s.x.push_back(p.bandwidth);
        nf_s.y.push_back(p.noise_free_error);
        overlay.x.push_back(p.bandwidth);
        overlay.y.push_back(p.noise_free_error + report.envelope_c * delta * std::sqrt(p.bandwidth));
    }
    csv.close();
    mean_s.label = "mean error";
    nf_s.label = "noise-free";
    nf_s.color = "#d1495b";
    overlay.label = "noise-free + c delta sqrt(B)";
    overlay.color = "#333333";
    overlay.dashed = true;
    write_line_plot_svg(em.resolve("noise_bound.svg").string(), {mean_s, nf_s, overlay},
                        {"noise scaling, k=" + std::to_string(k), "B", "E^rec", true});

    ordered_json summary;
    summary["envelope_c"] = report.envelope_c;
    summary["all_hard_bounds_hold"] = report.all_hard_bounds_hold;
    std::cout << summary.dump(2) << '\n';
    em.write_manifest();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated Fourier transform on [-1,1]: transforms, stability constants, "
                 "harmonic measure, operator spectra, experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string out_dir = default_out_dir().string();
    std::int64_t seed = -1;
    app.add_option("--out-dir", out_dir, "output directory (or env TRUNCFT_OUT_DIR)");
    app.add_option("--seed", seed, "seed override for randomized commands");

    // transform
    auto* t = app.add_subcommand("transform", "forward truncated Fourier transform of f_k");
    int t_k = 0;
    double t_b = 0.0, t_h = 0.0;
    bool t_closed = false;
    std::size_t t_n = 2048;
    std::string t_out = "transform.csv";
    t->add_option("--k", t_k, "mode index")->required();
    t->add_option("--bandwidth", t_b, "bandwidth B")->required();
    t->add_option("--spacing", t_h, "grid spacing h with 2B/h integral")->required();
    t->add_flag("--closed-form", t_closed, "use the closed form instead of quadrature");
    t->add_option("--n-samples", t_n, "spatial quadrature nodes");
    t->add_option("--output", t_out, "output CSV name");

    // reconstruct
    auto* r = app.add_subcommand("reconstruct", "FRFT inversion of spectral samples");
    std::string r_in, r_out = "reconstruction.csv";
    std::size_t r_n = 0;
    r->add_option("--input", r_in, "spectral CSV (xi,re,im)")->required();
    r->add_option("--n-out", r_n, "output nodes (default: sample count)");
    r->add_option("--output", r_out, "output CSV name");

    // stability
    auto* s = app.add_subcommand("stability", "stability constants as JSON on stdout");
    double s_l = 0.0, s_b0 = 0.0, s_b = 0.0, s_gamma = 0.0, s_mesh = 1.0 / 64.0;
    s->add_option("--L", s_l, "half-strip height")->required();
    s->add_option("--B0", s_b0, "reference bandwidth")->required();
    s->add_option("--B", s_b, "truncation bandwidth")->required();
    s->add_option("--gamma", s_gamma, "margin factor > 1")->required();
    s->add_option("--mesh", s_mesh, "FD mesh");

    // harmonic-measure
    auto* hm = app.add_subcommand("harmonic-measure", "FD harmonic measure of the slit half-strip");
    double h_l = 0.0, h_b = 0.0, h_xmax = 0.0, h_mesh = 1.0 / 64.0;
    std::string h_prefix = "harmonic";
    hm->add_option("--L", h_l, "half-strip height")->required();
    hm->add_option("--B", h_b, "slit length")->required();
    hm->add_option("--xmax", h_xmax, "truncation length (default max(4B,4L,8))");
    hm->add_option("--mesh", h_mesh, "FD mesh");
    hm->add_option("--output-prefix", h_prefix, "output file prefix");

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "singular values of the discretized operator");
    double sp_b = 0.0;
    std::size_t sp_n = 512;
    std::string sp_prefix = "spectrum";
    sp->add_option("--bandwidth", sp_b, "bandwidth parameter B (Nyquist count)")->required();
    sp->add_option("--n", sp_n, "grid size per side");
    sp->add_option("--output-prefix", sp_prefix, "output file prefix");

    // sweep / critical
    auto* sw = app.add_subcommand("sweep", "error-vs-bandwidth Monte-Carlo sweep");
    std::string sw_cfg;
    sw->add_option("--config", sw_cfg, "key = value config file")->required();

    auto* cr = app.add_subcommand("critical", "critical bandwidths and line fits");
    std::string cr_cfg;
    cr->add_option("--config", cr_cfg, "key = value config file")->required();

    // noise-bound
    auto* nb = app.add_subcommand("noise-bound", "noise scaling and the hard error bound");
    int nb_k = 0;
    double nb_delta = 0.0, nb_bmin = 0.0, nb_bmax = 0.0, nb_rate = 16.0;
    std::size_t nb_points = 24, nb_trials = 100;
    nb->add_option("--k", nb_k, "mode index")->required();
    nb->add_option("--delta", nb_delta, "noise level")->required();
    nb->add_option("--b-min", nb_bmin, "lowest bandwidth (default omega)");
    nb->add_option("--b-max", nb_bmax, "highest bandwidth (default 4 omega)");
    nb->add_option("--points", nb_points, "bandwidth grid points");
    nb->add_option("--trials", nb_trials, "Monte-Carlo trials");
    nb->add_option("--rate", nb_rate, "sampling rate r with M = ceil(rB)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Emitter em;
    em.out_dir = out_dir;
    em.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : 0;

    try {
        if (t->parsed()) return cmd_transform(t_k, t_b, t_h, t_closed, t_n, t_out, std::move(em));
        if (r->parsed()) return cmd_reconstruct(r_in, r_n, r_out, std::move(em));
        if (s->parsed()) return cmd_stability(s_l, s_b0, s_b, s_gamma, s_mesh);
        if (hm->parsed()) return cmd_harmonic(h_l, h_b, h_xmax, h_mesh, h_prefix, std::move(em));
        if (sp->parsed()) return cmd_spectrum(sp_b, sp_n, sp_prefix, std::move(em));
        if (sw->parsed()) return cmd_sweep(sw_cfg, seed, std::move(em));
        if (cr->parsed()) return cmd_critical(cr_cfg, seed, std::move(em));
        if (nb->parsed())
            return cmd_noise_bound(nb_k, nb_delta, nb_bmin, nb_bmax, nb_points, nb_trials, nb_rate,
                                   std::move(em));
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}
