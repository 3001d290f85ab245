#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "thdas/sample.hpp"

namespace thdas {

/// Labeled, single-unit time series with strictly increasing timestamps.
struct Series {
    std::string label;
    Unit unit = Unit::volts;
    std::vector<Timestamp> times;
    Eigen::VectorXd values;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    /// Throws `ContractError` on a length mismatch or non-increasing time.
    void validate() const;
};

Series make_series(std::string label, Unit unit, std::vector<Timestamp> times, std::vector<double> values);

/// Engineering values of one channel.
Series series_from_samples(std::span<const Sample> samples, std::size_t channel, std::string label);

/// Series named by a CSV column: "temp_c", "rh_pct", "chN" (calibrated
/// value of channel N) or "chN_raw" (the code converted to bus volts).
Series series_from_column(std::span<const Sample> samples, std::string_view column, std::string label,
                          const std::array<Unit, channel_count>& channel_units);

/// Median spacing between consecutive points, in seconds; 0 for fewer than
/// two points.
double median_interval_s(const Series& series);

struct SeriesComparison {
    double max_abs_dev = 0.0;
    double mean_abs_dev = 0.0;
    std::size_t n_compared = 0;
    double tolerance = 0.0;
    bool within_tolerance = false;
};

/// Pairs each point of `a` with the nearest point of `b` no farther away
/// than half of `a`'s median sampling interval and summarizes |b - a|.
/// Throws `ContractError` on a unit mismatch and `AlignmentError` if no pair
/// can be formed.
SeriesComparison compare_series(const Series& a, const Series& b, double tolerance);

std::string format_comparison(const SeriesComparison& c, Unit unit);

}  // namespace thdas
