#include "thdas/protocol.hpp"

#include "thdas/error.hpp"

namespace thdas {

AdcCode::AdcCode(int value) {
    if (value < 0 || value > max_value) {
        throw RangeError("ADC code " + std::to_string(value) + " outside [0, 1023]");
    }
    value_ = static_cast<std::uint16_t>(value);
}

Frame Frame::from_values(int ch0, int ch1, int ch2, int ch3) {
    return Frame{{AdcCode(ch0), AdcCode(ch1), AdcCode(ch2), AdcCode(ch3)}};
}

void encode_frame_into(const Frame& frame, std::array<char, record_size>& out) {
    std::size_t pos = 0;
    for (const AdcCode code : frame.codes) {
        unsigned v = code.value();
        for (int i = 3; i >= 0; --i) {
            out[pos + static_cast<std::size_t>(i)] = static_cast<char>('0' + v % 10);
            v /= 10;
        }
        pos += 4;
    }
    out[record_digits] = record_delimiter;
}

std::string encode_frame(const Frame& frame) {
    std::array<char, record_size> buf{};
    encode_frame_into(frame, buf);
    return std::string(buf.data(), buf.size());
}

DecodeDiagnostics& DecodeDiagnostics::operator+=(const DecodeDiagnostics& other) {
    frames_ok += other.frames_ok;
    frames_rejected += other.frames_rejected;
    bytes_skipped += other.bytes_skipped;
    return *this;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

DecodeResult FrameDecoder::decode_chunk(std::string_view bytes) {
    DecodeResult result;
    result.delta = decode_chunk(bytes, result.frames);
    return result;
}

DecodeDiagnostics FrameDecoder::decode_chunk(std::string_view bytes, std::vector<Frame>& out) {
    DecodeDiagnostics delta;
    for (const char c : bytes) {
        if (c == record_delimiter) {
            finish_record(out, delta);
            continue;
        }
        if (discarding_) {
            ++discarded_bytes_;
            continue;
        }
        // A non-digit or a 17th byte already makes the record invalid.
        if (!is_digit(c) || partial_.size() == record_digits) {
            discarding_ = true;
            discarded_bytes_ = partial_.size() + 1;
            partial_.clear();
            continue;
        }
        partial_.push_back(c);
    }
    totals_ += delta;
    return delta;
}

void FrameDecoder::finish_record(std::vector<Frame>& out, DecodeDiagnostics& delta) {
    if (discarding_ || partial_.size() != record_digits) {
        delta.frames_rejected += 1;
        delta.bytes_skipped += (discarding_ ? discarded_bytes_ : partial_.size()) + 1;
        discarding_ = false;
        discarded_bytes_ = 0;
        partial_.clear();
        return;
    }

    Frame frame;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        int v = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            v = v * 10 + (partial_[ch * 4 + i] - '0');
        }
        if (v > AdcCode::max_value) {
            delta.frames_rejected += 1;
            delta.bytes_skipped += record_size;
            partial_.clear();
            return;
        }
        frame.codes[ch] = AdcCode(v);
    }
    partial_.clear();
    delta.frames_ok += 1;
    out.push_back(frame);
}

}  // namespace thdas
