#include "proxops/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace proxops {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Bounds {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();

    void include(double x, double y) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }

    void finalize() {
        if (!(x_min < x_max)) {
            x_min -= 1.0;
            x_max += 1.0;
        }
        if (!(y_min < y_max)) {
            y_min -= 1.0;
            y_max += 1.0;
        }
        const double pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& plot_palette() {
    static const std::vector<std::string> palette{
        "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};
    return palette;
}

void SvgChart::render(const std::filesystem::path& path) const {
    Bounds b;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            b.include(s.x[i], s.y[i]);
            if (s.band_low.size() == s.x.size()) b.include(s.x[i], s.band_low[i]);
            if (s.band_high.size() == s.x.size()) b.include(s.x[i], s.band_high[i]);
        }
    }
    for (const PlotRegion& r : regions) {
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            b.include(r.x[i], r.y_low[i]);
            b.include(r.x[i], r.y_high[i]);
        }
    }
    b.finalize();

    const double plot_w = width - kMarginLeft - kMarginRight;
    const double plot_h = height - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - b.x_min) / (b.x_max - b.x_min) * plot_w; };
    auto py = [&](double y) {
        return kMarginTop + plot_h - (y - b.y_min) / (b.y_max - b.y_min) * plot_h;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open svg for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const PlotRegion& r : regions) {
        if (r.x.empty()) continue;
        out << "<polygon fill=\"" << r.color << "\" fill-opacity=\"" << r.opacity
            << "\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            out << num(px(r.x[i])) << ',' << num(py(r.y_low[i])) << ' ';
        }
        for (std::size_t i = r.x.size(); i-- > 0;) {
            out << num(px(r.x[i])) << ',' << num(py(r.y_high[i])) << ' ';
        }
        out << "\"/>\n";
    }

    for (const PlotSeries& s : series) {
        if (s.band_low.size() == s.x.size() && !s.x.empty()) {
            out << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.2\" stroke=\"none\" "
                << "points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << num(px(s.x[i])) << ',' << num(py(s.band_low[i])) << ' ';
            }
            for (std::size_t i = s.x.size(); i-- > 0;) {
                out << num(px(s.x[i])) << ',' << num(py(s.band_high[i])) << ' ';
            }
            out << "\"/>\n";
        }
    }

    // axes
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    if (x_ticks.empty()) {
        for (double t : nice_ticks(b.x_min, b.x_max)) {
            out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
                << num(px(t)) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << num(px(t)) << "\" y=\"" << kMarginTop + plot_h + 20
                << "\" font-size=\"12\" text-anchor=\"middle\">" << num(t) << "</text>\n";
        }
    } else {
        for (const auto& [t, label] : x_ticks) {
            out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
                << num(px(t)) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << num(px(t)) << "\" y=\"" << kMarginTop + plot_h + 20
                << "\" font-size=\"12\" text-anchor=\"middle\">" << xml_escape(label)
                << "</text>\n";
        }
    }
    for (double t : nice_ticks(b.y_min, b.y_max)) {
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(py(t)) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(py(t) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << num(t) << "</text>\n";
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py(t)) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << num(py(t))
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }

    for (const PlotSeries& s : series) {
        if (s.line && s.x.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
            }
            out << "\"/>\n";
        }
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                    << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            }
        }
    }

    out << "<text x=\"" << width / 2 << "\" y=\"20\" font-size=\"15\" text-anchor=\"middle\">"
        << xml_escape(title) << "</text>\n";
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

    if (legend) {
        int ly = kMarginTop + 8;
        for (const PlotSeries& s : series) {
            if (s.label.empty()) continue;
            out << "<line x1=\"" << kMarginLeft + plot_w - 130 << "\" y1=\"" << ly << "\" x2=\""
                << kMarginLeft + plot_w - 110 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << kMarginLeft + plot_w - 105 << "\" y=\"" << ly + 4
                << "\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
            ly += 16;
        }
    }
    out << "</svg>\n";
}

void SvgBarChart::render(const std::filesystem::path& path) const {
    if (labels.size() != heights.size()) {
        throw std::invalid_argument("bar chart labels/heights size mismatch");
    }
    const double plot_w = width - kMarginLeft - kMarginRight;
    const double plot_h = height - kMarginTop - kMarginBottom;
    const double y_max = heights.empty() ? 1.0
                                         : std::max(1e-12, *std::max_element(heights.begin(),
                                                                             heights.end())) *
                                               1.08;
    const std::size_t n = heights.size();
    const double slot = plot_w / static_cast<double>(std::max<std::size_t>(n, 1));
    const double bar_w = slot * 0.8;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open svg for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (double t : nice_ticks(0.0, y_max)) {
        const double y = kMarginTop + plot_h - t / y_max * plot_h;
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }

    const std::size_t label_stride = n > static_cast<std::size_t>(max_x_labels)
                                         ? (n + max_x_labels - 1) / max_x_labels
                                         : 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = kMarginLeft + slot * (static_cast<double>(i) + 0.1);
        const double h = heights[i] / y_max * plot_h;
        out << "<rect x=\"" << num(x) << "\" y=\"" << num(kMarginTop + plot_h - h) << "\" width=\""
            << num(bar_w) << "\" height=\"" << num(h) << "\" fill=\"" << color << "\"/>\n";
        if (i % label_stride == 0) {
            out << "<text x=\"" << num(x + bar_w / 2) << "\" y=\"" << kMarginTop + plot_h + 16
                << "\" font-size=\"10\" text-anchor=\"middle\">" << xml_escape(labels[i])
                << "</text>\n";
        }
    }

    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" font-size=\"15\" text-anchor=\"middle\">"
        << xml_escape(title) << "</text>\n";
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    out << "</svg>\n";
}

}  // namespace proxops
