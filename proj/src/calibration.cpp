#include "thdas/calibration.hpp"

#include <algorithm>

namespace thdas {

std::string_view unit_symbol(Unit unit) {
    switch (unit) {
        case Unit::celsius:
            return "°C";
        case Unit::percent_rh:
            return "%RH";
        case Unit::volts:
            return "V";
    }
    return "?";
}

bool Sample::any_flagged() const {
    return std::any_of(flags.begin(), flags.end(), [](ReadingFlags f) { return f != flag_none; });
}

const Polynomial<double>& rh_calibration_polynomial() {
    static const Polynomial<double> eq =
        Polynomial<double>::from_descending({15.538, -161.37, 655.54, -1289.1, 1259.3, -472.15});
    return eq;
}

ChannelProfile temperature_profile(int channel) {
    ChannelProfile p;
    p.channel = channel;
    p.transform = LinearMap<double>{10.0, 0.0};
    p.unit = Unit::celsius;
    p.input_range = ValueRange{0.0, zener_clamp_volts};
    p.output_range = ValueRange{0.0, 50.0};
    return p;
}

ChannelProfile humidity_profile(int channel) {
    ChannelProfile p;
    p.channel = channel;
    p.conditioning_inverse = LinearMap<double>{2.0, -1.0}.inverse();
    p.transform = rh_calibration_polynomial();
    p.unit = Unit::percent_rh;
    p.input_range = rh_sensor_span;
    p.output_range = rh_nominal_span;
    p.physical_range = rh_physical_span;
    return p;
}

ChannelProfile raw_volts_profile(int channel) {
    ChannelProfile p;
    p.channel = channel;
    return p;
}

ProfileSet default_profiles() {
    return {temperature_profile(0), humidity_profile(1), raw_volts_profile(2), raw_volts_profile(3)};
}

double code_to_bus_voltage(AdcCode code, const ChannelProfile& profile) {
    return static_cast<double>(code.value()) * profile.adc_full_scale / static_cast<double>(profile.adc_max_code);
}

double code_to_bus_voltage(AdcCode code) {
    return static_cast<double>(code.value()) * adc_full_scale_volts / static_cast<double>(adc_max_code);
}

FlaggedValue temperature_from_bus(double v_bus) {
    FlaggedValue out{10.0 * v_bus, flag_none};
    if (!(v_bus >= 0.0 && v_bus <= zener_clamp_volts)) {
        out.flags |= flag_input_range;
    }
    return out;
}

double bus_to_sensor_voltage_rh(double v_bus) { return (v_bus + 1.0) / 2.0; }

FlaggedValue rh_from_sensor_voltage(double sensor_volts) {
    FlaggedValue out{eval_polynomial(rh_calibration_polynomial(), sensor_volts), flag_none};
    if (!rh_sensor_span.contains(sensor_volts)) {
        out.flags |= flag_input_range;
    }
    if (!rh_nominal_span.contains(out.value)) {
        out.flags |= flag_output_range;
    }
    if (!rh_physical_span.contains(out.value)) {
        out.flags |= flag_saturated;
    }
    return out;
}

ChannelReading calibrate_code(AdcCode code, const ChannelProfile& profile) {
    const double bus = code_to_bus_voltage(code, profile);
    const double sensor = profile.conditioning_inverse ? (*profile.conditioning_inverse)(bus) : bus;

    ChannelReading reading;
    reading.value.unit = profile.unit;
    reading.value.value = std::visit(
        [sensor](const auto& transform) -> double {
            using T = std::decay_t<decltype(transform)>;
            if constexpr (std::is_same_v<T, RawVolts>) {
                return sensor;
            } else {
                return transform(sensor);
            }
        },
        profile.transform);

    if (profile.input_range && !profile.input_range->contains(sensor)) {
        reading.flags |= flag_input_range;
    }
    if (profile.output_range && !profile.output_range->contains(reading.value.value)) {
        reading.flags |= flag_output_range;
    }
    if (profile.physical_range && !profile.physical_range->contains(reading.value.value)) {
        reading.flags |= flag_saturated;
    }
    if (code.value() >= profile.adc_max_code) {
        reading.flags |= flag_saturated;
    }
    return reading;
}

Sample calibrate_frame(const Frame& frame, const ProfileSet& profiles, Timestamp timestamp) {
    Sample s;
    s.timestamp = timestamp;
    s.raw = frame;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        const ChannelReading r = calibrate_code(frame.codes[ch], profiles[ch]);
        s.values[ch] = r.value;
        s.flags[ch] = r.flags;
    }
    return s;
}

std::optional<std::size_t> channel_with_unit(const ProfileSet& profiles, Unit unit) {
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        if (profiles[ch].unit == unit) {
            return ch;
        }
    }
    return std::nullopt;
}

}  // namespace thdas
