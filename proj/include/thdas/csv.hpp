#pragma once

#include <bitset>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thdas/calibration.hpp"
#include "thdas/sample.hpp"
#include "thdas/sink.hpp"

namespace thdas {

inline constexpr std::string_view csv_header = "timestamp,ch0_raw,ch1_raw,ch2_raw,ch3_raw,temp_c,rh_pct,flags";

using ChannelMask = std::bitset<channel_count>;

inline ChannelMask all_channels() { return ChannelMask{}.set(); }

/// Which channels feed the temp_c and rh_pct columns. Either may be absent,
/// leaving the column empty.
struct CsvLayout {
    std::optional<std::size_t> temperature_channel;
    std::optional<std::size_t> humidity_channel;

    /// First enabled °C and %RH channels of the profile set.
    static CsvLayout from_profiles(const ProfileSet& profiles, ChannelMask enabled = all_channels());
};

/// "ch0:s;ch1:io" style flag text; letters i (input range), o (output
/// range), s (saturated). Empty when nothing is flagged.
std::string format_flags(const std::array<ReadingFlags, channel_count>& flags);
std::optional<std::array<ReadingFlags, channel_count>> parse_flags(std::string_view text);

/// Fixed-point-free rendering with 6 significant digits.
std::string format_real(double v);

std::string format_csv_row(const Sample& sample, const CsvLayout& layout);

/// Buffered CSV appender. Flushes whenever `flush_interval` has elapsed
/// since the previous flush, and on `close`.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, CsvLayout layout, bool append = false,
              std::chrono::milliseconds flush_interval = std::chrono::seconds(1));
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void write(const Sample& sample);
    void flush();
    void close();

    std::uint64_t rows_written() const { return rows_; }
    const std::filesystem::path& path() const { return path_; }

private:
    void check(const char* action);

    std::filesystem::path path_;
    CsvLayout layout_;
    std::ofstream out_;
    std::chrono::milliseconds flush_interval_;
    std::chrono::steady_clock::time_point last_flush_;
    std::uint64_t rows_ = 0;
};

class CsvSink : public SampleSink {
public:
    CsvSink(std::filesystem::path path, CsvLayout layout, bool append = false,
            std::chrono::milliseconds flush_interval = std::chrono::seconds(1))
        : writer_(std::move(path), layout, append, flush_interval) {}

    void consume(const Sample& sample) override { writer_.write(sample); }
    void finish() override { writer_.close(); }

    const CsvWriter& writer() const { return writer_; }

private:
    CsvWriter writer_;
};

/// Writes header (unless appending to a non-empty file) and one row per
/// sample; returns the number of data rows written.
std::uint64_t write_csv(std::span<const Sample> samples, const std::filesystem::path& path,
                        const CsvLayout& layout, bool append = false);

struct CsvReadResult {
    std::vector<Sample> samples;
    /// 1-based line numbers of rows that could not be parsed.
    std::vector<std::size_t> skipped_lines;
};

/// Parses a file written by `CsvWriter`. Channel values missing from the
/// file are recomputed from the raw codes with `profiles`. Throws
/// `SchemaError` naming the first bad column if the header does not match,
/// and `IoError` if the file cannot be read.
CsvReadResult read_csv(const std::filesystem::path& path, const ProfileSet& profiles = default_profiles());

}  // namespace thdas
