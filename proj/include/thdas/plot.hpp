#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "thdas/analysis.hpp"
#include "thdas/calibration.hpp"

namespace thdas {

struct PlotOptions {
    std::string title = "Reconstructed waveform";
    int width = 960;
    int height = 540;
};

/// Geometry of a rendered plot, enough to map polyline points back to data.
struct PlotLayout {
    double left = 0, top = 0, width = 0, height = 0;
    double t_span_s = 0;
    /// One entry per distinct unit; index 0 is the left axis, 1 the right.
    std::vector<Unit> axis_units;
    std::vector<ValueRange> axis_ranges;
    /// Axis index of each series, in input order.
    std::vector<std::size_t> series_axis;
};

/// Self-contained SVG: time on x, value on y, one polyline per series,
/// legend, and one y axis per unit (at most two). Throws `UsageError` for
/// an empty series set, an empty series, or more than two units.
std::string render_svg_plot(std::span<const Series> series, const PlotOptions& options = {},
                            PlotLayout* layout = nullptr);

PlotLayout write_svg_plot(std::span<const Series> series, const std::filesystem::path& path,
                          const PlotOptions& options = {});

/// Two-column text ("seconds value") per series, blocks separated by two blank
/// lines (gnuplot datasets) and introduced by a "# label (unit)" comment.
std::string render_text_table(std::span<const Series> series);

void write_text_table(std::span<const Series> series, const std::filesystem::path& path);

}  // namespace thdas
