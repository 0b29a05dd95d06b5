#pragma once

// Hand-rolled SVG line charts for the sweep/predict CSVs. Output is a
// standalone file and byte-deterministic for identical input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace sppdon {

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct SvgOptions {
    int width = 640;
    int height = 440;
    bool log_x = false;
    bool log_y = false;
    std::string title, x_label, y_label;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

inline std::string svg_line_chart(std::vector<SvgSeries> series, const SvgOptions& opt) {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    if (series.empty()) throw std::invalid_argument("svg_line_chart: no series");

    const auto tr_x = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    const auto tr_y = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::size_t n_points = 0;
    for (auto& s : series)
        for (auto& [x, y] : s.points) {
            if ((opt.log_x && x <= 0.0) || (opt.log_y && y <= 0.0))
                throw std::invalid_argument("svg_line_chart: log scale needs positive values");
            xmin = std::min(xmin, tr_x(x));
            xmax = std::max(xmax, tr_x(x));
            ymin = std::min(ymin, tr_y(y));
            ymax = std::max(ymax, tr_y(y));
            ++n_points;
        }
    if (n_points == 0) throw std::invalid_argument("svg_line_chart: no data points");
    if (xmax - xmin < 1e-300) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-300) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double ml = 70, mr = 20, mt = opt.title.empty() ? 20 : 40, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    const auto px = [&](double v) { return ml + (tr_x(v) - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double v) { return mt + ph - (tr_y(v) - ymin) / (ymax - ymin) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
           "\" height=\"" + std::to_string(opt.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        out += "<text x=\"" + detail::fmt(opt.width / 2.0) +
               "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">" +
               opt.title + "</text>\n";

    // Axes and ticks.
    out += "<g stroke=\"black\" fill=\"none\"><path d=\"M" + detail::fmt(ml) + " " +
           detail::fmt(mt) + " L" + detail::fmt(ml) + " " + detail::fmt(mt + ph) + " L" +
           detail::fmt(ml + pw) + " " + detail::fmt(mt + ph) + "\"/></g>\n";
    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / ticks;
        const double fy = ymin + (ymax - ymin) * t / ticks;
        const double sx = ml + pw * t / ticks;
        const double sy = mt + ph - ph * t / ticks;
        const double vx = opt.log_x ? std::pow(10.0, fx) : fx;
        const double vy = opt.log_y ? std::pow(10.0, fy) : fy;
        out += "<line x1=\"" + detail::fmt(sx) + "\" y1=\"" + detail::fmt(mt + ph) + "\" x2=\"" +
               detail::fmt(sx) + "\" y2=\"" + detail::fmt(mt + ph + 4) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + detail::fmt(sx) + "\" y=\"" + detail::fmt(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
               detail::fmt_tick(vx) + "</text>\n";
        out += "<line x1=\"" + detail::fmt(ml - 4) + "\" y1=\"" + detail::fmt(sy) + "\" x2=\"" +
               detail::fmt(ml) + "\" y2=\"" + detail::fmt(sy) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + detail::fmt(ml - 8) + "\" y=\"" + detail::fmt(sy + 4) +
               "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
               detail::fmt_tick(vy) + "</text>\n";
    }
    if (!opt.x_label.empty())
        out += "<text x=\"" + detail::fmt(ml + pw / 2) + "\" y=\"" +
               detail::fmt(mt + ph + 38) +
               "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
               opt.x_label + "</text>\n";
    if (!opt.y_label.empty())
        out += "<text x=\"16\" y=\"" + detail::fmt(mt + ph / 2) +
               "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 " +
               detail::fmt(mt + ph / 2) + ")\">" + opt.y_label + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        std::string d;
        auto pts = series[s].points;
        std::stable_sort(pts.begin(), pts.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < pts.size(); ++i)
            d += (i == 0 ? "M" : " L") + detail::fmt(px(pts[i].first)) + " " +
                 detail::fmt(py(pts[i].second));
        out += "<path d=\"" + d + "\" stroke=\"" + color + "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
        for (auto& [x, y] : pts)
            out += "<circle cx=\"" + detail::fmt(px(x)) + "\" cy=\"" + detail::fmt(py(y)) +
                   "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        // legend
        const double ly = mt + 14.0 * (s + 1);
        out += "<line x1=\"" + detail::fmt(ml + pw - 120) + "\" y1=\"" + detail::fmt(ly) +
               "\" x2=\"" + detail::fmt(ml + pw - 100) + "\" y2=\"" + detail::fmt(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + detail::fmt(ml + pw - 95) + "\" y=\"" + detail::fmt(ly + 4) +
               "\" font-size=\"11\" font-family=\"sans-serif\">" + series[s].name + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace sppdon
