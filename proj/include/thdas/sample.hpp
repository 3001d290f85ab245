#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string_view>

#include "thdas/protocol.hpp"

namespace thdas {

/// UTC wall time with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class Unit { celsius, percent_rh, volts };

std::string_view unit_symbol(Unit unit);

struct EngineeringValue {
    double value = 0.0;
    Unit unit = Unit::volts;
};

/// Per-channel out-of-range markers. Values are always computed; these only
/// annotate them.
enum ReadingFlag : std::uint8_t {
    flag_none = 0,
    /// Transform input (e.g. RH sensor voltage) outside its valid span.
    flag_input_range = 1u << 0,
    /// Engineering value outside the channel's nominal span.
    flag_output_range = 1u << 1,
    /// Converter at its top rail; the true input may be higher.
    flag_saturated = 1u << 2,
};
using ReadingFlags = std::uint8_t;

struct Sample {
    Timestamp timestamp{};
    Frame raw{};
    std::array<EngineeringValue, channel_count> values{};
    std::array<ReadingFlags, channel_count> flags{};

    bool flagged(std::size_t channel) const { return flags[channel] != flag_none; }
    bool any_flagged() const;
};

}  // namespace thdas
