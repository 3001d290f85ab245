#include "thdas/device_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "thdas/error.hpp"
#include "thdas/text.hpp"

namespace thdas {

std::optional<double> sample_source(const AmbientSource& source, double t_s, std::uint64_t tick) {
    return std::visit(
        [&](const auto& s) -> std::optional<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DisabledSource>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, ConstantSource>) {
                return s.value;
            } else if constexpr (std::is_same_v<T, SinusoidSource>) {
                return s.mean + s.amplitude * std::sin(2.0 * std::numbers::pi * t_s / s.period_s + s.phase_rad);
            } else {
                if (s.values.empty()) {
                    return std::nullopt;
                }
                const auto i = std::min<std::uint64_t>(tick, s.values.size() - 1);
                return s.values[static_cast<std::size_t>(i)];
            }
        },
        source);
}

std::optional<ValueRange> source_extent(const AmbientSource& source) {
    return std::visit(
        [](const auto& s) -> std::optional<ValueRange> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DisabledSource>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, ConstantSource>) {
                return ValueRange{s.value, s.value};
            } else if constexpr (std::is_same_v<T, SinusoidSource>) {
                const double a = std::abs(s.amplitude);
                return ValueRange{s.mean - a, s.mean + a};
            } else {
                if (s.values.empty()) {
                    return std::nullopt;
                }
                const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
                return ValueRange{*lo, *hi};
            }
        },
        source);
}

namespace {

std::vector<double> numbers_or_throw(std::string_view list, std::string_view spec) {
    std::vector<double> out;
    for (const auto& tok : split_any(list, ",")) {
        const auto v = parse_double(trim(tok));
        if (!v || !std::isfinite(*v)) {
            throw ConfigError("bad number '" + tok + "' in source '" + std::string(spec) + "'");
        }
        out.push_back(*v);
    }
    return out;
}

ValueRange parse_envelope(std::string_view text) {
    const auto v = numbers_or_throw(text, text);
    if (v.size() != 2 || !(v[0] < v[1])) {
        throw ConfigError("envelope '" + std::string(text) + "' must be 'min, max' with min < max");
    }
    return {v[0], v[1]};
}

}  // namespace

AmbientSource parse_source(std::string_view spec) {
    const std::string_view s = trim(spec);
    if (s == "off" || s == "none") {
        return DisabledSource{};
    }
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("source '" + std::string(s) + "' must be off, const:V, sin:MEAN,AMP,PERIOD[,PHASE] or csv:PATH:COLUMN");
    }
    const std::string_view kind = s.substr(0, colon);
    const std::string_view args = s.substr(colon + 1);
    if (kind == "const") {
        const auto v = numbers_or_throw(args, s);
        if (v.size() != 1) {
            throw ConfigError("const source takes one value: '" + std::string(s) + "'");
        }
        return ConstantSource{v[0]};
    }
    if (kind == "sin") {
        const auto v = numbers_or_throw(args, s);
        if (v.size() != 3 && v.size() != 4) {
            throw ConfigError("sin source takes MEAN,AMP,PERIOD[,PHASE]: '" + std::string(s) + "'");
        }
        if (!(v[2] > 0.0)) {
            throw ConfigError("sin period must be positive: '" + std::string(s) + "'");
        }
        return SinusoidSource{v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.0};
    }
    if (kind == "csv") {
        const auto sep = args.rfind(':');
        if (sep == std::string_view::npos || sep == 0 || sep + 1 == args.size()) {
            throw ConfigError("csv source needs PATH:COLUMN: '" + std::string(s) + "'");
        }
        return load_replay_source(std::filesystem::path(std::string(args.substr(0, sep))), args.substr(sep + 1));
    }
    throw ConfigError("unknown source kind '" + std::string(kind) + "'");
}

ReplaySource load_replay_source(const std::filesystem::path& path, std::string_view column) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open replay file '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("replay file '" + path.string() + "' is empty");
    }
    const auto header = split_fields(trim(line), ',');
    const auto it = std::find_if(header.begin(), header.end(), [&](std::string_view h) { return trim(h) == column; });
    if (it == header.end()) {
        throw ConfigError("replay file '" + path.string() + "' has no column '" + std::string(column) + "'");
    }
    const auto index = static_cast<std::size_t>(it - header.begin());

    ReplaySource src;
    src.origin = path.string() + ":" + std::string(column);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(trim(line), ',');
        const auto v = index < fields.size() ? parse_double(trim(fields[index])) : std::nullopt;
        if (!v || !std::isfinite(*v)) {
            throw ConfigError("replay file '" + path.string() + "' line " + std::to_string(line_no) +
                              ": no numeric value in column '" + std::string(column) + "'");
        }
        src.values.push_back(*v);
    }
    if (src.values.empty()) {
        throw ConfigError("replay file '" + path.string() + "' has no data rows");
    }
    return src;
}

std::string describe(const AmbientSource& source) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DisabledSource>) {
                os << "off";
            } else if constexpr (std::is_same_v<T, ConstantSource>) {
                os << "const:" << s.value;
            } else if constexpr (std::is_same_v<T, SinusoidSource>) {
                os << "sin:" << s.mean << "," << s.amplitude << "," << s.period_s << "," << s.phase_rad;
            } else {
                os << "csv:" << s.origin << " (" << s.values.size() << " rows)";
            }
        },
        source);
    return os.str();
}

void AmbientScenario::validate() const {
    auto check = [](const AmbientSource& src, const ValueRange& env, const char* what) {
        if (const auto ext = source_extent(src)) {
            if (ext->min < env.min || ext->max > env.max) {
                std::ostringstream os;
                os << what << " source " << describe(src) << " spans [" << ext->min << ", " << ext->max
                   << "], outside its envelope [" << env.min << ", " << env.max << "]";
                throw ConfigError(os.str());
            }
        }
    };
    if (!(temperature_envelope.min < temperature_envelope.max) || !(humidity_envelope.min < humidity_envelope.max)) {
        throw ConfigError("scenario envelopes must satisfy min < max");
    }
    if (duration_s && !(*duration_s >= 0.0)) {
        throw ConfigError("scenario duration must be non-negative");
    }
    const auto& eq = rh_calibration_polynomial();
    if (humidity_envelope.min < eq(rh_sensor_span.min) || humidity_envelope.max > eq(rh_sensor_span.max)) {
        std::ostringstream os;
        os << "humidity envelope [" << humidity_envelope.min << ", " << humidity_envelope.max
           << "] leaves the sensor's range [" << eq(rh_sensor_span.min) << ", " << eq(rh_sensor_span.max) << "]";
        throw ConfigError(os.str());
    }
    check(temperature, temperature_envelope, "temperature");
    check(humidity, humidity_envelope, "humidity");
}

AmbientScenario parse_scenario_shorthand(std::string_view spec) {
    const std::string_view s = trim(spec);
    if (s.substr(0, 6) != "const:") {
        throw ConfigError("scenario shorthand must be const:T,RH, got '" + std::string(s) + "'");
    }
    const auto v = numbers_or_throw(s.substr(6), s);
    if (v.size() != 2) {
        throw ConfigError("scenario shorthand must be const:T,RH, got '" + std::string(s) + "'");
    }
    AmbientScenario sc;
    sc.temperature = ConstantSource{v[0]};
    sc.humidity = ConstantSource{v[1]};
    return sc;
}

AmbientScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
    AmbientScenario sc;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos) {
            l = l.substr(0, hash);
        }
        l = trim(l);
        if (l.empty()) {
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(l.substr(0, eq));
        const std::string_view value = trim(l.substr(eq + 1));
        try {
            if (key == "temperature") {
                sc.temperature = parse_source(value);
            } else if (key == "humidity") {
                sc.humidity = parse_source(value);
            } else if (key == "duration") {
                const auto d = parse_double(value);
                if (!d) {
                    throw ConfigError("bad duration '" + std::string(value) + "'");
                }
                sc.duration_s = *d;
            } else if (key == "temperature_envelope") {
                sc.temperature_envelope = parse_envelope(value);
            } else if (key == "humidity_envelope") {
                sc.humidity_envelope = parse_envelope(value);
            } else {
                throw ConfigError("unknown key '" + std::string(key) + "'");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return sc;
}

double lm35_voltage(double celsius) { return 0.010 * celsius; }

double tps_voltage(double percent_rh) {
    return invert_monotone(rh_calibration_polynomial(), percent_rh, rh_sensor_span.min, rh_sensor_span.max);
}

void SignalChain::validate() const {
    if (!(gain > 0.0)) {
        throw ConfigError("signal chain gain must be positive");
    }
    if (!(clamp_min < clamp_max)) {
        throw ConfigError("signal chain clamp_min must be below clamp_max");
    }
}

double apply_chain(const SignalChain& chain, double volts) {
    return std::min(std::max(chain.gain * volts + chain.offset, chain.clamp_min), chain.clamp_max);
}

AdcCode quantize(const AdcModel& adc, double volts) {
    const int max_code = adc.max_code();
    const double scaled = std::round(volts / adc.vref * max_code);
    const double clamped = std::clamp(scaled, 0.0, static_cast<double>(max_code));
    return AdcCode(static_cast<int>(clamped));
}

Frame sense(const DeviceModel& device, std::optional<double> celsius, std::optional<double> percent_rh,
            std::mt19937_64* noise_rng) {
    std::array<double, channel_count> bus{};
    bus[0] = celsius ? apply_chain(device.temperature, lm35_voltage(*celsius)) : 0.0;
    bus[1] = percent_rh ? apply_chain(device.humidity, tps_voltage(*percent_rh)) : 0.0;
    bus[2] = device.spare_volts[0];
    bus[3] = device.spare_volts[1];

    Frame frame;
    std::uniform_real_distribution<double> jitter(-device.noise_lsb, device.noise_lsb);
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        double v = bus[ch];
        if (noise_rng != nullptr && device.noise_lsb > 0.0) {
            v += jitter(*noise_rng) * device.adc.lsb_volts();
        }
        frame.codes[ch] = quantize(device.adc, v);
    }
    return frame;
}

void SimulatorConfig::validate() const {
    if (!(sample_rate_hz >= 0.1 && sample_rate_hz <= 1000.0)) {
        throw ConfigError("sample rate must lie in [0.1, 1000] Hz");
    }
    if (device.adc.bits != 10) {
        throw ConfigError("the wire format carries 10-bit codes only");
    }
    if (!(device.noise_lsb >= 0.0)) {
        throw ConfigError("noise amplitude must be non-negative");
    }
    device.temperature.validate();
    device.humidity.validate();
}

RunSummary run_simulator(const AmbientScenario& scenario, const SimulatorConfig& config, ByteSink& sink,
                         const std::atomic<bool>* stop, const std::function<void(const TickRecord&)>& on_tick) {
    scenario.validate();
    config.validate();

    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration<double>(1.0 / config.sample_rate_hz);
    const auto start = clock::now();
    std::mt19937_64 rng(config.seed);
    std::array<char, record_size> record{};

    auto stop_requested = [stop] { return stop != nullptr && stop->load(std::memory_order_relaxed); };

    RunSummary summary;
    for (std::uint64_t tick = 0;; ++tick) {
        const double t = static_cast<double>(tick) / config.sample_rate_hz;
        if (config.max_frames && tick >= *config.max_frames) {
            break;
        }
        if (scenario.duration_s && t >= *scenario.duration_s) {
            break;
        }
        if (stop_requested()) {
            summary.stopped = true;
            break;
        }
        if (config.pacing == Pacing::wall_clock) {
            const auto deadline = start + std::chrono::duration_cast<clock::duration>(period * static_cast<double>(tick));
            while (clock::now() < deadline && !stop_requested()) {
                std::this_thread::sleep_until(std::min(deadline, clock::now() + std::chrono::milliseconds(50)));
            }
            if (stop_requested()) {
                summary.stopped = true;
                break;
            }
        }

        TickRecord rec;
        rec.tick = tick;
        rec.t_s = t;
        rec.celsius = sample_source(scenario.temperature, t, tick);
        rec.percent_rh = sample_source(scenario.humidity, t, tick);
        rec.frame = sense(config.device, rec.celsius, rec.percent_rh, &rng);
        encode_frame_into(rec.frame, record);
        try {
            sink.write(std::string_view(record.data(), record.size()));
        } catch (const TransportError& e) {
            summary.transport_error = e.what();
            break;
        }
        ++summary.frames_emitted;
        summary.simulated_s = t;
        if (on_tick) {
            on_tick(rec);
        }
    }
    try {
        sink.flush();
    } catch (const TransportError& e) {
        if (!summary.transport_error) {
            summary.transport_error = e.what();
        }
    }
    return summary;
}

}  // namespace thdas
