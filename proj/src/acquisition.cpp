#include "thdas/acquisition.hpp"

#include <array>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <vector>

#include "thdas/error.hpp"
#include "thdas/timestamp.hpp"

namespace thdas {

void SessionConfig::validate() const {
    if (const auto* serial = std::get_if<SerialEndpoint>(&transport)) {
        if (!is_standard_baud(serial->baud)) {
            throw ConfigError("unsupported baud rate " + std::to_string(serial->baud));
        }
    }
    if (channels_enabled.none()) {
        throw ConfigError("at least one channel must be enabled");
    }
    if (read_timeout.count() <= 0) {
        throw ConfigError("read timeout must be positive");
    }
    if (max_duration_s && !(*max_duration_s > 0.0)) {
        throw ConfigError("max duration must be positive");
    }
}

Timestamp WallClock::now() { return now_utc(); }

Timestamp SyntheticClock::now() {
    const auto offset = std::chrono::round<std::chrono::milliseconds>(step_ * static_cast<double>(calls_++));
    return base_ + offset;
}

double AcquisitionStats::effective_rate_hz() const {
    if (!first || !last || frames_ok < 2 || *last <= *first) {
        return 0.0;
    }
    const double span_s = std::chrono::duration<double>(*last - *first).count();
    return static_cast<double>(frames_ok - 1) / span_s;
}

std::string format_stats(const AcquisitionStats& stats) {
    std::ostringstream os;
    os << "frames_ok:       " << stats.frames_ok << "\n"
       << "frames_rejected: " << stats.frames_rejected << "\n"
       << "bytes_total:     " << stats.bytes_total << "\n"
       << "bytes_skipped:   " << stats.bytes_skipped << "\n"
       << "first:           " << (stats.first ? format_timestamp(*stats.first) : "-") << "\n"
       << "last:            " << (stats.last ? format_timestamp(*stats.last) : "-") << "\n";
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.3f", stats.effective_rate_hz());
    os << "rate_hz:         " << rate << "\n";
    const char* end = stats.error ? "error" : stats.stopped ? "stopped" : stats.timed_out ? "max-duration" : "end-of-stream";
    os << "ended_by:        " << end << "\n";
    if (stats.error) {
        os << "error:           " << *stats.error << "\n";
    }
    return os.str();
}

std::string live_readout(const Sample& sample, ChannelMask enabled) {
    std::string line = format_timestamp(sample.timestamp);
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        if (!enabled.test(ch)) {
            continue;
        }
        const auto& v = sample.values[ch];
        const char* fmt = v.unit == Unit::celsius ? "%.2f" : v.unit == Unit::percent_rh ? "%.1f" : "%.3f";
        char num[32];
        std::snprintf(num, sizeof num, fmt, v.value);
        line += "  ch" + std::to_string(ch) + " " + num + " " + std::string(unit_symbol(v.unit));
        if (sample.flagged(ch)) {
            line += "!";
        }
    }
    return line;
}

void LiveReadoutSink::consume(const Sample& sample) { out_ << live_readout(sample, enabled_) << '\n'; }

AcquisitionStats acquire_from(ByteSource& source, const SessionConfig& config, std::span<SampleSink* const> sinks,
                              const std::atomic<bool>* stop, SampleClock* clock) {
    config.validate();
    WallClock wall;
    SampleClock& stamp = clock != nullptr ? *clock : wall;

    using steady = std::chrono::steady_clock;
    const auto started = steady::now();
    const auto deadline = config.max_duration_s
                              ? std::optional(started + std::chrono::duration_cast<steady::duration>(
                                                            std::chrono::duration<double>(*config.max_duration_s)))
                              : std::nullopt;

    FrameDecoder decoder;
    std::vector<Frame> frames;
    std::array<char, 4096> buffer{};
    AcquisitionStats stats;

    while (true) {
        if (stop != nullptr && stop->load(std::memory_order_relaxed)) {
            stats.stopped = true;
            break;
        }
        auto timeout = config.read_timeout;
        if (deadline) {
            const auto now = steady::now();
            if (now >= *deadline) {
                stats.timed_out = true;
                break;
            }
            timeout = std::min(timeout, std::chrono::ceil<std::chrono::milliseconds>(*deadline - now));
        }

        const ReadResult r = source.read(buffer, timeout);
        if (r.bytes > 0) {
            stats.bytes_total += r.bytes;
            frames.clear();
            decoder.decode_chunk(std::string_view(buffer.data(), r.bytes), frames);
            stats.frames_rejected = decoder.diagnostics().frames_rejected;
            stats.bytes_skipped = decoder.diagnostics().bytes_skipped;

            for (const Frame& f : frames) {
                Timestamp t = stamp.now();
                if (stats.last && t < *stats.last) {
                    t = *stats.last;
                }
                const Sample sample = calibrate_frame(f, config.profiles, t);
                try {
                    for (SampleSink* sink : sinks) {
                        sink->consume(sample);
                    }
                } catch (const std::exception& e) {
                    stats.error = e.what();
                    return stats;
                }
                ++stats.frames_ok;
                if (!stats.first) {
                    stats.first = t;
                }
                stats.last = t;
            }
        }
        if (r.end_of_stream) {
            break;
        }
    }

    try {
        for (SampleSink* sink : sinks) {
            sink->finish();
        }
    } catch (const std::exception& e) {
        stats.error = e.what();
    }
    return stats;
}

AcquisitionStats acquire(const SessionConfig& config, std::span<SampleSink* const> sinks,
                         const std::atomic<bool>* stop, SampleClock* clock) {
    config.validate();
    const std::unique_ptr<ByteSource> source = open_transport(config.transport);

    std::vector<SampleSink*> all(sinks.begin(), sinks.end());
    std::optional<CsvSink> csv;
    if (config.csv_path) {
        csv.emplace(*config.csv_path, CsvLayout::from_profiles(config.profiles, config.channels_enabled),
                    config.csv_append);
        all.insert(all.begin(), &*csv);
    }
    return acquire_from(*source, config, all, stop, clock);
}

}  // namespace thdas
