#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "thdas/calibration.hpp"
#include "thdas/csv.hpp"
#include "thdas/sink.hpp"
#include "thdas/transport.hpp"

namespace thdas {

struct SessionConfig {
    TransportConfig transport = FileEndpoint{};
    ProfileSet profiles = default_profiles();
    std::optional<std::filesystem::path> csv_path;
    bool csv_append = false;
    ChannelMask channels_enabled = all_channels();
    std::optional<double> max_duration_s;
    std::chrono::milliseconds read_timeout{250};

    /// Throws `ConfigError` on a non-standard baud rate, no enabled channel,
    /// or a non-positive read timeout.
    void validate() const;
};

/// Source of host-receive timestamps.
class SampleClock {
public:
    virtual ~SampleClock() = default;
    virtual Timestamp now() = 0;
};

class WallClock : public SampleClock {
public:
    Timestamp now() override;
};

/// base + round(k * step) for the k-th call, k = 0, 1, 2, ...
class SyntheticClock : public SampleClock {
public:
    SyntheticClock(Timestamp base, std::chrono::duration<double> step) : base_(base), step_(step) {}
    Timestamp now() override;

private:
    Timestamp base_;
    std::chrono::duration<double> step_;
    std::uint64_t calls_ = 0;
};

struct AcquisitionStats {
    std::uint64_t frames_ok = 0;
    std::uint64_t frames_rejected = 0;
    std::uint64_t bytes_total = 0;
    std::uint64_t bytes_skipped = 0;
    std::optional<Timestamp> first;
    std::optional<Timestamp> last;
    bool stopped = false;
    bool timed_out = false;
    /// Set when a sink failure ended the session early.
    std::optional<std::string> error;

    double effective_rate_hz() const;
};

/// Multi-line summary block for standard error.
std::string format_stats(const AcquisitionStats& stats);

/// "2024-01-01T00:00:00.000Z  ch0 25.02 °C  ch1 50.0 %RH"; flagged values
/// carry a trailing '!'.
std::string live_readout(const Sample& sample, ChannelMask enabled = all_channels());

class LiveReadoutSink : public SampleSink {
public:
    LiveReadoutSink(std::ostream& out, ChannelMask enabled) : out_(out), enabled_(enabled) {}
    void consume(const Sample& sample) override;

private:
    std::ostream& out_;
    ChannelMask enabled_;
};

/// Polling loop over an already open source: read with timeout, decode,
/// calibrate, timestamp, deliver to every sink in order. Ends on end of
/// stream, `max_duration_s`, or `stop`. A throwing sink ends the session
/// with `error` set; decoder rejections are only counted.
AcquisitionStats acquire_from(ByteSource& source, const SessionConfig& config, std::span<SampleSink* const> sinks,
                              const std::atomic<bool>* stop = nullptr, SampleClock* clock = nullptr);

/// Opens the configured transport, adds a CSV sink when `csv_path` is set,
/// and runs `acquire_from`.
AcquisitionStats acquire(const SessionConfig& config, std::span<SampleSink* const> sinks = {},
                         const std::atomic<bool>* stop = nullptr, SampleClock* clock = nullptr);

}  // namespace thdas
