#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thdas/calibration.hpp"
#include "thdas/protocol.hpp"
#include "thdas/transport.hpp"

namespace thdas {

// ---------------------------------------------------------------------------
// Ambient scenario

struct DisabledSource {};

struct ConstantSource {
    double value = 0.0;
};

/// mean + amplitude * sin(2*pi*t/period + phase)
struct SinusoidSource {
    double mean = 0.0;
    double amplitude = 0.0;
    double period_s = 60.0;
    double phase_rad = 0.0;
};

/// One value per tick, replayed from a CSV column; holds the last value
/// once exhausted.
struct ReplaySource {
    std::vector<double> values;
    std::string origin;
};

using AmbientSource = std::variant<DisabledSource, ConstantSource, SinusoidSource, ReplaySource>;

/// Value of the source at simulated time `t_s` (tick index `tick`), or
/// nothing when the source is disabled.
std::optional<double> sample_source(const AmbientSource& source, double t_s, std::uint64_t tick);

/// Smallest interval containing every value the source can produce.
std::optional<ValueRange> source_extent(const AmbientSource& source);

/// "off", "const:V", "sin:MEAN,AMP,PERIOD[,PHASE]" or "csv:PATH:COLUMN".
AmbientSource parse_source(std::string_view spec);

/// Loads a named column of a headed CSV file.
ReplaySource load_replay_source(const std::filesystem::path& path, std::string_view column);

std::string describe(const AmbientSource& source);

struct AmbientScenario {
    AmbientSource temperature = ConstantSource{25.0};
    AmbientSource humidity = ConstantSource{50.0};
    /// Simulated seconds; empty means unbounded.
    std::optional<double> duration_s;
    ValueRange temperature_envelope{0.0, 50.0};
    ValueRange humidity_envelope{12.0, 88.0};

    /// Throws `ConfigError` if a source can leave its envelope or the
    /// humidity envelope leaves the sensor's invertible range.
    void validate() const;
};

/// "const:T,RH" shorthand for two constant sources.
AmbientScenario parse_scenario_shorthand(std::string_view spec);

/// Key-value scenario file: temperature, humidity, duration,
/// temperature_envelope, humidity_envelope.
AmbientScenario load_scenario(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Front end

/// LM35 output, 10 mV/degC.
double lm35_voltage(double celsius);

/// Humidity sensor output for a true %RH; exact inverse of the calibration
/// polynomial on [1, 3] V. Throws `RangeError` outside its image.
double tps_voltage(double percent_rh);

/// Conditioning amplifier followed by the zener clamp.
struct SignalChain {
    double gain = 1.0;
    double offset = 0.0;
    double clamp_min = 0.0;
    double clamp_max = zener_clamp_volts;

    void validate() const;
};

inline constexpr SignalChain temperature_chain{10.0, 0.0};
inline constexpr SignalChain humidity_chain{2.0, -1.0};

double apply_chain(const SignalChain& chain, double volts);

struct AdcModel {
    double vref = adc_full_scale_volts;
    int bits = 10;

    int max_code() const { return (1 << bits) - 1; }
    double lsb_volts() const { return vref / max_code(); }
};

/// Rounds to the nearest code; inputs beyond the reference saturate.
AdcCode quantize(const AdcModel& adc, double volts);

struct DeviceModel {
    SignalChain temperature = temperature_chain;
    SignalChain humidity = humidity_chain;
    AdcModel adc;
    /// Constant bus voltages on the spare channels 2 and 3.
    std::array<double, 2> spare_volts{0.0, 0.0};
    /// Peak of the uniform additive noise, in LSB; zero disables it.
    double noise_lsb = 0.0;
};

/// One conversion of all four channels, scanned 0 -> 3. A disabled source
/// drives its channel at 0 V.
Frame sense(const DeviceModel& device, std::optional<double> celsius, std::optional<double> percent_rh,
            std::mt19937_64* noise_rng = nullptr);

// ---------------------------------------------------------------------------
// Emission loop

enum class Pacing { as_fast_as_possible, wall_clock };

struct SimulatorConfig {
    double sample_rate_hz = 1.0;
    std::optional<std::uint64_t> max_frames;
    Pacing pacing = Pacing::as_fast_as_possible;
    DeviceModel device;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TickRecord {
    std::uint64_t tick = 0;
    double t_s = 0.0;
    std::optional<double> celsius;
    std::optional<double> percent_rh;
    Frame frame;
};

struct RunSummary {
    std::uint64_t frames_emitted = 0;
    double simulated_s = 0.0;
    bool stopped = false;
    std::optional<std::string> transport_error;
};

/// Emits one encoded frame per tick into `sink` until the scenario
/// duration, `max_frames`, or `stop` ends the run. A failing sink ends the
/// run with `transport_error` set and the frames written so far counted.
RunSummary run_simulator(const AmbientScenario& scenario, const SimulatorConfig& config, ByteSink& sink,
                         const std::atomic<bool>* stop = nullptr,
                         const std::function<void(const TickRecord&)>& on_tick = {});

}  // namespace thdas
