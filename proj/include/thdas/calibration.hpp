#pragma once

#include <array>
#include <optional>
#include <variant>

#include "thdas/polynomial.hpp"
#include "thdas/protocol.hpp"
#include "thdas/sample.hpp"

namespace thdas {

/// Closed interval used for out-of-range flagging.
struct ValueRange {
    double min = 0.0;
    double max = 0.0;

    bool contains(double v) const { return v >= min && v <= max; }
};

inline constexpr double adc_full_scale_volts = 5.0;
inline constexpr int adc_max_code = AdcCode::max_value;
inline constexpr double zener_clamp_volts = 5.1;

/// The relative-humidity calibration polynomial, x in sensor volts, result in %RH.
const Polynomial<double>& rh_calibration_polynomial();

/// Nominal sensor output span of the humidity sensor, in volts.
inline constexpr ValueRange rh_sensor_span{1.0, 3.0};
/// Nominal measurement span of the humidity sensor, in %RH.
inline constexpr ValueRange rh_nominal_span{10.0, 90.0};
/// Physically meaningful %RH.
inline constexpr ValueRange rh_physical_span{0.0, 100.0};

struct FlaggedValue {
    double value = 0.0;
    ReadingFlags flags = flag_none;
};

struct RawVolts {};
using SensorTransform = std::variant<LinearMap<double>, Polynomial<double>, RawVolts>;

/// Complete raw-code to engineering-unit transform for one channel:
/// code -> bus volts -> conditioning inverse -> sensor transform.
struct ChannelProfile {
    int channel = 0;
    double adc_full_scale = adc_full_scale_volts;
    int adc_max_code = thdas::adc_max_code;
    /// Maps conditioned bus volts back to sensor volts; empty means identity.
    std::optional<LinearMap<double>> conditioning_inverse;
    SensorTransform transform = RawVolts{};
    Unit unit = Unit::volts;
    /// Valid span of the sensor-transform input.
    std::optional<ValueRange> input_range;
    /// Nominal span of the engineering value.
    std::optional<ValueRange> output_range;
    /// Values outside this span are flagged as saturated.
    std::optional<ValueRange> physical_range;
};

using ProfileSet = std::array<ChannelProfile, channel_count>;

ChannelProfile temperature_profile(int channel = 0);
ChannelProfile humidity_profile(int channel = 1);
ChannelProfile raw_volts_profile(int channel);

/// ch0 temperature, ch1 relative humidity, ch2/ch3 raw volts.
ProfileSet default_profiles();

double code_to_bus_voltage(AdcCode code, const ChannelProfile& profile);
double code_to_bus_voltage(AdcCode code);

/// 10 degC per bus volt; flagged outside [0, 5.1] V.
FlaggedValue temperature_from_bus(double v_bus);

/// Inverse of the humidity conditioning stage v_bus = 2 * v_sensor - 1.
double bus_to_sensor_voltage_rh(double v_bus);

/// Applies the calibration polynomial. Flags sensor voltages outside [1, 3] V,
/// results outside the nominal [10, 90] %RH span, and results outside
/// [0, 100] %RH as saturated.
FlaggedValue rh_from_sensor_voltage(double sensor_volts);

struct ChannelReading {
    EngineeringValue value;
    ReadingFlags flags = flag_none;
};

ChannelReading calibrate_code(AdcCode code, const ChannelProfile& profile);

Sample calibrate_frame(const Frame& frame, const ProfileSet& profiles, Timestamp timestamp);

/// First channel whose profile produces `unit`, if any.
std::optional<std::size_t> channel_with_unit(const ProfileSet& profiles, Unit unit);

}  // namespace thdas
