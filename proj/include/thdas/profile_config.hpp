#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "thdas/calibration.hpp"

namespace thdas {

/// Parses a channel-profile configuration.
///
/// One `chN.key = value` pair per line, `#` starts a comment. Every channel
/// starts from its default profile (or from `chN.preset`) and the remaining
/// keys override individual fields:
///
///     ch1.preset        = humidity            # temperature | humidity | raw
///     ch1.unit          = %RH                 # °C | C | %RH | RH | V
///     ch1.conditioning  = 0.5, 0.5            # bus->sensor gain, offset; or identity
///     ch1.transform     = polynomial          # linear | polynomial | raw
///     ch1.coefficients  = 15.538 -161.37 655.54 -1289.1 1259.3 -472.15
///     ch0.gain          = 10                  # linear transform
///     ch0.offset        = 0
///     ch1.input_range   = 1, 3                # or none
///     ch1.output_range  = 10, 90
///     ch1.physical_range = 0, 100
///     ch2.adc_full_scale = 5.0
///
/// Polynomial coefficients are written highest degree first. Throws
/// `ConfigError` naming the line on any malformed entry.
ProfileSet parse_profiles(std::string_view text);

ProfileSet load_profiles(const std::filesystem::path& path);

/// Serializes to the format accepted by `parse_profiles`.
std::string format_profiles(const ProfileSet& profiles);

}  // namespace thdas
