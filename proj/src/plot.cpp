#include "thdas/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thdas/error.hpp"

namespace thdas {

namespace {

constexpr std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape_xml(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v, int precision = 3) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

/// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    const double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

void check_input(std::span<const Series> series) {
    if (series.empty()) {
        throw UsageError("nothing to plot: no series given");
    }
    for (const auto& s : series) {
        if (s.empty()) {
            throw UsageError("series '" + s.label + "' is empty");
        }
    }
}

Timestamp earliest(std::span<const Series> series) {
    Timestamp t0 = series.front().times.front();
    for (const auto& s : series) {
        t0 = std::min(t0, s.times.front());
    }
    return t0;
}

}  // namespace

std::string render_svg_plot(std::span<const Series> series, const PlotOptions& options, PlotLayout* layout_out) {
    check_input(series);

    PlotLayout layout;
    const Timestamp t0 = earliest(series);
    for (const auto& s : series) {
        layout.t_span_s = std::max(layout.t_span_s, std::chrono::duration<double>(s.times.back() - t0).count());
        auto it = std::find(layout.axis_units.begin(), layout.axis_units.end(), s.unit);
        if (it == layout.axis_units.end()) {
            if (layout.axis_units.size() == 2) {
                throw UsageError("cannot plot more than two units on one figure");
            }
            layout.axis_units.push_back(s.unit);
            layout.axis_ranges.push_back({s.values.minCoeff(), s.values.maxCoeff()});
            layout.series_axis.push_back(layout.axis_units.size() - 1);
        } else {
            const auto axis = static_cast<std::size_t>(it - layout.axis_units.begin());
            auto& r = layout.axis_ranges[axis];
            r.min = std::min(r.min, s.values.minCoeff());
            r.max = std::max(r.max, s.values.maxCoeff());
            layout.series_axis.push_back(axis);
        }
    }
    for (auto& r : layout.axis_ranges) {
        const double span = r.max - r.min;
        const double pad = span > 0.0 ? 0.05 * span : std::max(1.0, 0.05 * std::abs(r.max));
        r.min -= pad;
        r.max += pad;
    }
    const double t_span = layout.t_span_s > 0.0 ? layout.t_span_s : 1.0;
    const bool hours = t_span > 7200.0;
    const double t_scale = hours ? 3600.0 : 1.0;

    const bool two_axes = layout.axis_units.size() == 2;
    layout.left = 80;
    layout.top = 50;
    layout.width = options.width - layout.left - (two_axes ? 80 : 30);
    layout.height = options.height - layout.top - 60;

    auto x_of = [&](double t_s) { return layout.left + t_s / t_span * layout.width; };
    auto y_of = [&](std::size_t axis, double v) {
        const auto& r = layout.axis_ranges[axis];
        return layout.top + (r.max - v) / (r.max - r.min) * layout.height;
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << " " << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << options.width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
        << escape_xml(options.title) << "</text>\n"
        << "<rect x=\"" << num(layout.left) << "\" y=\"" << num(layout.top) << "\" width=\"" << num(layout.width)
        << "\" height=\"" << num(layout.height) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Time axis.
    const double t_step = nice_step(t_span / t_scale, 8);
    for (double tick = 0.0; tick <= t_span / t_scale + 1e-9 * t_step; tick += t_step) {
        const double x = x_of(tick * t_scale);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(layout.top + layout.height) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(layout.top + layout.height + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << num(x) << "\" y=\"" << num(layout.top + layout.height + 18)
            << "\" text-anchor=\"middle\">" << tick_label(tick) << "</text>\n";
    }
    svg << "<text x=\"" << num(layout.left + layout.width / 2) << "\" y=\"" << options.height - 15
        << "\" text-anchor=\"middle\">time (" << (hours ? "h" : "s") << ")</text>\n";

    // Value axes.
    for (std::size_t axis = 0; axis < layout.axis_units.size(); ++axis) {
        const auto& r = layout.axis_ranges[axis];
        const bool right = axis == 1;
        const double x_axis = right ? layout.left + layout.width : layout.left;
        const double dir = right ? 1.0 : -1.0;
        const double step = nice_step(r.max - r.min, 6);
        for (double tick = std::ceil(r.min / step) * step; tick <= r.max; tick += step) {
            const double y = y_of(axis, tick);
            svg << "<line x1=\"" << num(x_axis) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x_axis + dir * 5)
                << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>"
                << "<text x=\"" << num(x_axis + dir * 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\""
                << (right ? "start" : "end") << "\">" << tick_label(tick) << "</text>\n";
        }
        const double lx = right ? options.width - 15.0 : 18.0;
        const double ly = layout.top + layout.height / 2;
        std::string label;
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (layout.series_axis[i] == axis) {
                label += (label.empty() ? "" : ", ") + series[i].label;
            }
        }
        svg << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
            << num(lx) << " " << num(ly) << ")\">" << escape_xml(label) << " ("
            << escape_xml(std::string(unit_symbol(layout.axis_units[axis]))) << ")</text>\n";
    }

    // Traces and legend.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % palette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" data-label=\""
            << escape_xml(s.label) << "\" points=\"";
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double t = std::chrono::duration<double>(s.times[k] - t0).count();
            svg << (k ? " " : "") << num(x_of(t)) << "," << num(y_of(layout.series_axis[i], s.values[static_cast<Eigen::Index>(k)]));
        }
        svg << "\"/>\n";
        const double ly = layout.top + 16 + 18.0 * static_cast<double>(i);
        const double lx = layout.left + layout.width - 170;
        svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
            << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly) << "\">" << escape_xml(s.label) << " ("
            << escape_xml(std::string(unit_symbol(s.unit))) << ")</text>\n";
    }
    svg << "</svg>\n";

    if (layout_out != nullptr) {
        *layout_out = layout;
    }
    return svg.str();
}

PlotLayout write_svg_plot(std::span<const Series> series, const std::filesystem::path& path,
                          const PlotOptions& options) {
    PlotLayout layout;
    const std::string svg = render_svg_plot(series, options, &layout);
    std::ofstream out(path, std::ios::trunc);
    out << svg;
    out.close();
    if (!out) {
        throw IoError("cannot write plot '" + path.string() + "'");
    }
    return layout;
}

std::string render_text_table(std::span<const Series> series) {
    check_input(series);
    const Timestamp t0 = earliest(series);
    std::ostringstream os;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (i > 0) {
            os << "\n\n";
        }
        os << "# " << s.label << " (" << unit_symbol(s.unit) << ")\n";
        for (std::size_t k = 0; k < s.size(); ++k) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f %.6g\n", std::chrono::duration<double>(s.times[k] - t0).count(),
                          s.values[static_cast<Eigen::Index>(k)]);
            os << buf;
        }
    }
    return os.str();
}

void write_text_table(std::span<const Series> series, const std::filesystem::path& path) {
    const std::string text = render_text_table(series);
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw IoError("cannot write table '" + path.string() + "'");
    }
}

}  // namespace thdas
