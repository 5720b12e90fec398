#pragma once

// Dependency-free SVG emission: line/scatter plots with optional log-y
// axis, and grayscale heatmaps for harmonic-measure fields.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "truncft/errors.hpp"
#include "truncft/harmonic.hpp"

namespace truncft {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb4";
    bool dashed = false;
    bool points_only = false;
    std::string label;
};

struct SvgPlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_y = false;
    int width = 820;
    int height = 560;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace detail

inline void write_line_plot_svg(const std::string& path, const std::vector<SvgSeries>& series,
                                const SvgPlotOptions& options = {}) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const SvgSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (options.log_y) {
                if (!(yv > 0.0)) continue;
                yv = std::log10(yv);
            }
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymin > ymax) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = options.width - ml - mr, ph = options.height - mt - mb;
    const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double yv) { return mt + ph - (yv - ymin) / (ymax - ymin) * ph; };

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out << "<text x=\"" << options.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << options.title << "</text>\n";

    // axes box
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks: 6 in x; decades (or 6 linear) in y
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        out << "<line x1=\"" << detail::svg_num(px(xv)) << "\" y1=\"" << mt + ph << "\" x2=\""
            << detail::svg_num(px(xv)) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(px(xv)) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::tick_label(xv) << "</text>\n";
    }
    if (options.log_y) {
        for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(py(d)) << "\" x2=\"" << ml
                << "\" y2=\"" << detail::svg_num(py(d)) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(py(d) + 4)
                << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
        }
    } else {
        for (int t = 0; t <= 5; ++t) {
            const double yv = ymin + (ymax - ymin) * t / 5.0;
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(py(yv)) << "\" x2=\"" << ml
                << "\" y2=\"" << detail::svg_num(py(yv)) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(py(yv) + 4)
                << "\" text-anchor=\"end\" font-size=\"11\">" << detail::tick_label(yv) << "</text>\n";
        }
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << options.height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << options.x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << options.y_label
        << (options.log_y ? " (log)" : "") << "</text>\n";

    double legend_y = mt + 14;
    for (const SvgSeries& s : series) {
        std::string pts;
        std::vector<std::pair<double, double>> marks;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (options.log_y) {
                if (!(yv > 0.0)) continue;
                yv = std::log10(yv);
            }
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            marks.emplace_back(px(s.x[i]), py(yv));
            pts += detail::svg_num(px(s.x[i])) + "," + detail::svg_num(py(yv)) + " ";
        }
        if (!s.points_only && marks.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (s.dashed) out << " stroke-dasharray=\"6 4\"";
            out << " points=\"" << pts << "\"/>\n";
        }
        if (s.points_only)
            for (const auto& [mx, my] : marks)
                out << "<circle cx=\"" << detail::svg_num(mx) << "\" cy=\"" << detail::svg_num(my)
                    << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        if (!s.label.empty()) {
            out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << legend_y - 4 << "\" x2=\""
                << ml + pw - 125 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"";
            if (s.dashed) out << " stroke-dasharray=\"6 4\"";
            out << "/>\n<text x=\"" << ml + pw - 120 << "\" y=\"" << legend_y
                << "\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    out << "</svg>\n";
}

/// Grayscale heatmap of the field (white = 1 on the slit, black = 0),
/// downsampled to at most max_cells_x columns.
inline void write_heatmap_svg(const std::string& path, const HarmonicMeasureField& field,
                              std::size_t max_cells_x = 320) {
    const std::size_t step = std::max<std::size_t>(1, (field.nx + max_cells_x - 1) / max_cells_x);
    const std::size_t cx = field.nx / step + 1, cy = field.ny / step + 1;
    const double cell = std::max(2.0, 780.0 / static_cast<double>(cx));
    const double width = cell * static_cast<double>(cx) + 40;
    const double height = cell * static_cast<double>(cy) + 60;

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"20\" y=\"20\" font-size=\"13\">harmonic measure: L=" << field.strip_half_height
        << " B=" << field.slit_length << " mesh=" << field.mesh << "</text>\n";
    for (std::size_t i = 0, ci = 0; i <= field.nx; i += step, ++ci)
        for (std::size_t j = 0, cj = 0; j <= field.ny; j += step, ++cj) {
            const int g = static_cast<int>(std::lround(255.0 * std::clamp(field.at(i, j), 0.0, 1.0)));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", g, g, g);
            out << "<rect x=\"" << detail::svg_num(20 + cell * static_cast<double>(ci)) << "\" y=\""
                << detail::svg_num(30 + cell * static_cast<double>(cy - 1 - cj)) << "\" width=\""
                << detail::svg_num(cell) << "\" height=\"" << detail::svg_num(cell) << "\" fill=\""
                << color << "\"/>\n";
        }
    out << "</svg>\n";
}

}  // namespace truncft
