#pragma once

// CSV emission/ingestion and the key = value experiment config format.
// All floating-point output uses 17 significant digits so files round-trip
// bit exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/experiments.hpp"
#include "truncft/harmonic.hpp"
#include "truncft/signals.hpp"
#include "truncft/transform.hpp"

namespace truncft {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    return out;
}

}  // namespace detail

inline void write_grid_signal_csv(const std::string& path, const GridSignal& signal) {
    std::ofstream out = detail::open_out(path);
    out << "x,value\n";
    for (std::size_t m = 0; m < signal.size(); ++m)
        out << fmt17(signal.node(m)) << ',' << fmt17(signal.values[m]) << '\n';
}

inline GridSignal read_grid_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw ValidationError(path + ": expected header 'x,value'");
    GridSignal signal;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &v) != 2)
            throw ValidationError(path + ": malformed row '" + line + "'");
        signal.values.push_back(v);
    }
    return signal;
}

inline void write_spectral_csv(const std::string& path, const SpectralSamples& samples) {
    std::ofstream out = detail::open_out(path);
    out << "xi,re,im\n";
    for (std::size_t m = 0; m < samples.values.size(); ++m)
        out << fmt17(samples.grid.node(m)) << ',' << fmt17(samples.values[m].real()) << ','
            << fmt17(samples.values[m].imag()) << '\n';
}

/// Read spectral samples back; the grid is recovered from the xi column and
/// must be uniform of the Xi_{B,h} form.
inline SpectralSamples read_spectral_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("xi,re,im", 0) != 0)
        throw ValidationError(path + ": expected header 'xi,re,im'");
    std::vector<double> xi;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
            throw ValidationError(path + ": malformed row '" + line + "'");
        xi.push_back(x);
        values.push_back(cplx(re, im));
    }
    if (xi.size() < 2) throw ValidationError(path + ": need at least 2 spectral rows");
    const double h = xi[1] - xi[0];
    for (std::size_t m = 1; m < xi.size(); ++m)
        if (std::abs(xi[m] - xi[m - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ValidationError(path + ": xi column is not uniformly spaced");
    if (std::abs(-xi.front() - (xi.back() + h) ) > 1e-9 * std::max(1.0, std::abs(xi.front())))
        throw ValidationError(path + ": xi column is not of the form (-B, ..., B-h)");
    SpectralSamples samples;
    samples.grid = FrequencyGrid{-xi.front(), h, xi.size()};
    samples.values = std::move(values);
    return samples;
}

inline void write_reconstruction_csv(const std::string& path, const Reconstruction& recon) {
    std::ofstream out = detail::open_out(path);
    out << "x,re,im\n";
    for (std::size_t m = 0; m < recon.size(); ++m)
        out << fmt17(recon.node(m)) << ',' << fmt17(recon.values[m].real()) << ','
            << fmt17(recon.values[m].imag()) << '\n';
}

inline void write_field_csv(const std::string& path, const HarmonicMeasureField& field) {
    std::ofstream out = detail::open_out(path);
    out << "x,y,w\n";
    for (std::size_t i = 0; i <= field.nx; ++i)
        for (std::size_t j = 0; j <= field.ny; ++j)
            out << fmt17(field.mesh * static_cast<double>(i)) << ','
                << fmt17(-field.strip_half_height + field.mesh * static_cast<double>(j)) << ','
                << fmt17(field.at(i, j)) << '\n';
}

inline void write_sigma_csv(const std::string& path, const std::vector<double>& sigmas) {
    std::ofstream out = detail::open_out(path);
    out << "index,sigma\n";
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        out << (i + 1) << ',' << fmt17(sigmas[i]) << '\n';
}

inline void write_report_csv(const std::string& path, const ExperimentReport& report) {
    std::ofstream out = detail::open_out(path);
    out << "k,B,delta,mean_err,stderr,trials\n";
    for (const SweepCell& cell : report.cells)
        out << cell.k << ',' << fmt17(cell.bandwidth) << ',' << fmt17(cell.delta) << ','
            << fmt17(cell.mean_error) << ',' << fmt17(cell.std_error) << ',' << cell.trials << '\n';
}

// ---------------------------------------------------------------------------
// key = value config files
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

inline double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": not a number: '" + s + "'");
    }
}

inline long long parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": not an integer: '" + s + "'");
    }
}

}  // namespace detail

/// Sweep/critical/noise-bound configuration parsed from `key = value` lines.
/// Lists are comma separated; '#' starts a comment. Errors carry the file
/// name and line number.
struct SweepFileConfig {
    ExperimentConfig experiment;
    std::vector<double> e_cut_list{0.5};
};

inline SweepFileConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);

    SweepFileConfig cfg;
    double b_min = 1.0, b_max = 40.0, b_step = 0.5;
    bool saw_grid_key = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (value.empty()) throw ValidationError(where + ": empty value for '" + key + "'");

        if (key == "k_list") {
            cfg.experiment.k_list.clear();
            for (const std::string& item : detail::split_list(value))
                cfg.experiment.k_list.push_back(static_cast<int>(detail::parse_int(item, where)));
        } else if (key == "delta_list") {
            cfg.experiment.delta_list.clear();
            for (const std::string& item : detail::split_list(value))
                cfg.experiment.delta_list.push_back(detail::parse_double(item, where));
        } else if (key == "e_cut_list") {
            cfg.e_cut_list.clear();
            for (const std::string& item : detail::split_list(value))
                cfg.e_cut_list.push_back(detail::parse_double(item, where));
        } else if (key == "b_min") {
            b_min = detail::parse_double(value, where);
            saw_grid_key = true;
        } else if (key == "b_max") {
            b_max = detail::parse_double(value, where);
            saw_grid_key = true;
        } else if (key == "b_step") {
            b_step = detail::parse_double(value, where);
            saw_grid_key = true;
        } else if (key == "rate") {
            cfg.experiment.rate = detail::parse_double(value, where);
        } else if (key == "trials") {
            cfg.experiment.trials = static_cast<std::size_t>(detail::parse_int(value, where));
        } else if (key == "seed") {
            cfg.experiment.seed = static_cast<std::uint64_t>(detail::parse_int(value, where));
        } else if (key == "e_cut") {
            cfg.experiment.e_cut = detail::parse_double(value, where);
        } else if (key == "persistence") {
            cfg.experiment.persistence = static_cast<std::size_t>(detail::parse_int(value, where));
        } else if (key == "threads") {
            cfg.experiment.threads = static_cast<std::size_t>(detail::parse_int(value, where));
        } else {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }

    if (saw_grid_key || cfg.experiment.b_grid.empty()) {
        if (b_step <= 0.0 || b_min <= 0.0 || b_max < b_min)
            throw ValidationError(path + ": need 0 < b_min <= b_max and b_step > 0");
        cfg.experiment.b_grid.clear();
        for (double b = b_min; b <= b_max + 1e-9 * b_step; b += b_step) cfg.experiment.b_grid.push_back(b);
    }
    if (cfg.experiment.k_list.empty()) cfg.experiment.k_list = {4};
    if (cfg.experiment.delta_list.empty()) cfg.experiment.delta_list = {0.0};
    if (!cfg.e_cut_list.empty()) cfg.experiment.e_cut = cfg.e_cut_list.front();

    cfg.experiment.validate();
    return cfg;
}

}  // namespace truncft
