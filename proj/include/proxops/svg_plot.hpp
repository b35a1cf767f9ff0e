#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace proxops {

/// Minimal dependency-free SVG chart writer: enough for interval-estimate
/// plots, histograms, trajectory traces and shaded constraint regions.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band_low;   // optional confidence band
    std::vector<double> band_high;
    std::string color = "#1f77b4";
    bool markers = false;
    bool line = true;
};

struct PlotRegion {
    // Vertical band between y_low(x) and y_high(x), e.g. safe/unsafe shading.
    std::vector<double> x;
    std::vector<double> y_low;
    std::vector<double> y_high;
    std::string color = "#2ca02c";
    double opacity = 0.25;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    std::vector<PlotRegion> regions;
    std::vector<std::pair<double, std::string>> x_ticks;  // custom tick labels
    int width = 720;
    int height = 480;
    bool legend = true;

    void render(const std::filesystem::path& path) const;
};

struct SvgBarChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<std::string> labels;  // one per bar
    std::vector<double> heights;
    std::string color = "#1f77b4";
    int width = 720;
    int height = 480;
    int max_x_labels = 21;  // thin out tick labels beyond this

    void render(const std::filesystem::path& path) const;
};

const std::vector<std::string>& plot_palette();

}  // namespace proxops
