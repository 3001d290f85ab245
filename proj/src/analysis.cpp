#include "thdas/analysis.hpp"

#include <algorithm>
#include <cstdio>

#include "thdas/calibration.hpp"
#include "thdas/error.hpp"
#include "thdas/text.hpp"

namespace thdas {

void Series::validate() const {
    if (static_cast<Eigen::Index>(times.size()) != values.size()) {
        throw ContractError("series '" + label + "' has mismatched time and value counts");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i - 1] < times[i])) {
            throw ContractError("series '" + label + "' timestamps are not strictly increasing at point " +
                                std::to_string(i));
        }
    }
}

Series make_series(std::string label, Unit unit, std::vector<Timestamp> times, std::vector<double> values) {
    Series s;
    s.label = std::move(label);
    s.unit = unit;
    s.times = std::move(times);
    s.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    s.validate();
    return s;
}

Series series_from_samples(std::span<const Sample> samples, std::size_t channel, std::string label) {
    if (channel >= channel_count) {
        throw ContractError("channel index out of range");
    }
    std::vector<Timestamp> t;
    std::vector<double> v;
    t.reserve(samples.size());
    v.reserve(samples.size());
    for (const auto& s : samples) {
        t.push_back(s.timestamp);
        v.push_back(s.values[channel].value);
    }
    const Unit unit = samples.empty() ? Unit::volts : samples.front().values[channel].unit;
    return make_series(std::move(label), unit, std::move(t), std::move(v));
}

Series series_from_column(std::span<const Sample> samples, std::string_view column, std::string label,
                          const std::array<Unit, channel_count>& channel_units) {
    auto by_unit = [&](Unit unit) -> std::size_t {
        for (std::size_t ch = 0; ch < channel_count; ++ch) {
            if (channel_units[ch] == unit) {
                return ch;
            }
        }
        throw UsageError("no channel carries " + std::string(unit_symbol(unit)) + " for column '" +
                         std::string(column) + "'");
    };
    if (column == "temp_c") {
        return series_from_samples(samples, by_unit(Unit::celsius), std::move(label));
    }
    if (column == "rh_pct") {
        return series_from_samples(samples, by_unit(Unit::percent_rh), std::move(label));
    }
    if (column.size() >= 3 && column.substr(0, 2) == "ch" && column[2] >= '0' && column[2] <= '3') {
        const auto ch = static_cast<std::size_t>(column[2] - '0');
        if (column.size() == 3) {
            return series_from_samples(samples, ch, std::move(label));
        }
        if (column.substr(3) == "_raw") {
            std::vector<Timestamp> t;
            std::vector<double> v;
            for (const auto& s : samples) {
                t.push_back(s.timestamp);
                v.push_back(code_to_bus_voltage(s.raw.codes[ch]));
            }
            return make_series(std::move(label), Unit::volts, std::move(t), std::move(v));
        }
    }
    throw UsageError("unknown column '" + std::string(column) + "' (use temp_c, rh_pct, chN or chN_raw)");
}

double median_interval_s(const Series& series) {
    if (series.size() < 2) {
        return 0.0;
    }
    std::vector<double> dt(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        dt[i - 1] = std::chrono::duration<double>(series.times[i] - series.times[i - 1]).count();
    }
    const auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
    std::nth_element(dt.begin(), mid, dt.end());
    if (dt.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(dt.begin(), mid);
    return (lower + upper) / 2.0;
}

SeriesComparison compare_series(const Series& a, const Series& b, double tolerance) {
    if (a.unit != b.unit) {
        throw ContractError("cannot compare '" + a.label + "' (" + std::string(unit_symbol(a.unit)) + ") with '" +
                            b.label + "' (" + std::string(unit_symbol(b.unit)) + ")");
    }
    const double half_window_s = median_interval_s(a) / 2.0;

    std::vector<double> deviations;
    deviations.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Timestamp t = a.times[i];
        const auto it = std::lower_bound(b.times.begin(), b.times.end(), t);
        std::optional<std::size_t> best;
        double best_dt = 0.0;
        auto consider = [&](std::vector<Timestamp>::const_iterator cand) {
            const double d = std::abs(std::chrono::duration<double>(*cand - t).count());
            if (d <= half_window_s && (!best || d < best_dt)) {
                best = static_cast<std::size_t>(cand - b.times.begin());
                best_dt = d;
            }
        };
        if (it != b.times.end()) {
            consider(it);
        }
        if (it != b.times.begin()) {
            consider(std::prev(it));
        }
        if (best) {
            deviations.push_back(std::abs(b.values[static_cast<Eigen::Index>(*best)] - a.values[static_cast<Eigen::Index>(i)]));
        }
    }
    if (deviations.empty()) {
        throw AlignmentError("no points of '" + b.label + "' align with '" + a.label + "'");
    }

    const Eigen::Map<const Eigen::ArrayXd> dev(deviations.data(), static_cast<Eigen::Index>(deviations.size()));
    SeriesComparison c;
    c.max_abs_dev = dev.maxCoeff();
    c.mean_abs_dev = dev.mean();
    c.n_compared = deviations.size();
    c.tolerance = tolerance;
    c.within_tolerance = c.max_abs_dev <= tolerance;
    return c;
}

std::string format_comparison(const SeriesComparison& c, Unit unit) {
    const std::string u(unit_symbol(unit));
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "n_compared:       %zu\nmax_abs_dev:      %.6g %s\nmean_abs_dev:     %.6g %s\n"
                  "tolerance:        %.6g %s\nwithin_tolerance: %s\n",
                  c.n_compared, c.max_abs_dev, u.c_str(), c.mean_abs_dev, u.c_str(), c.tolerance, u.c_str(),
                  c.within_tolerance ? "true" : "false");
    return buf;
}

}  // namespace thdas
