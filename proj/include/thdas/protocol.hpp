#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace thdas {

/// One 10-bit converter sample.
class AdcCode {
public:
    static constexpr std::uint16_t max_value = 1023;

    constexpr AdcCode() = default;

    /// Throws `RangeError` when `value` is outside [0, 1023].
    explicit AdcCode(int value);

    constexpr std::uint16_t value() const { return value_; }

    friend constexpr bool operator==(AdcCode, AdcCode) = default;

private:
    std::uint16_t value_ = 0;
};

inline constexpr std::size_t channel_count = 4;

/// All four channel codes captured at one sampling instant, channel 0 first.
struct Frame {
    std::array<AdcCode, channel_count> codes{};

    static Frame from_values(int ch0, int ch1, int ch2, int ch3);

    friend bool operator==(const Frame&, const Frame&) = default;
};

// Wire record: four zero-padded 4-digit decimal fields followed by '\n'.
inline constexpr std::size_t record_digits = 16;
inline constexpr std::size_t record_size = record_digits + 1;
inline constexpr char record_delimiter = '\n';

/// Encodes a frame as its 17-byte wire record.
std::string encode_frame(const Frame& frame);

/// Writes the 17-byte record into `out` without allocating.
void encode_frame_into(const Frame& frame, std::array<char, record_size>& out);

struct DecodeDiagnostics {
    std::uint64_t frames_ok = 0;
    std::uint64_t frames_rejected = 0;
    std::uint64_t bytes_skipped = 0;

    DecodeDiagnostics& operator+=(const DecodeDiagnostics& other);
    friend bool operator==(const DecodeDiagnostics&, const DecodeDiagnostics&) = default;
};

struct DecodeResult {
    std::vector<Frame> frames;
    DecodeDiagnostics delta;
};

/// Incremental decoder for the LF-delimited record stream.
///
/// Bytes may arrive in arbitrary chunks. A record is accepted iff it holds
/// exactly 16 ASCII digits whose four fields are each <= 1023. Anything else
/// up to and including the next LF is discarded and counted; decoding then
/// resumes with the following byte. The partial-record buffer never grows
/// beyond one record, so arbitrary input runs in constant memory.
class FrameDecoder {
public:
    DecodeResult decode_chunk(std::string_view bytes);

    /// Appends decoded frames to `out` and returns the diagnostics delta.
    DecodeDiagnostics decode_chunk(std::string_view bytes, std::vector<Frame>& out);

    const DecodeDiagnostics& diagnostics() const { return totals_; }

    /// Bytes of the trailing record still waiting for its delimiter.
    std::size_t pending_bytes() const { return discarding_ ? discarded_bytes_ : partial_.size(); }

private:
    void finish_record(std::vector<Frame>& out, DecodeDiagnostics& delta);

    std::string partial_;
    bool discarding_ = false;
    std::size_t discarded_bytes_ = 0;
    DecodeDiagnostics totals_;
};

}  // namespace thdas
