#include "thdas/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>

#include "thdas/error.hpp"
#include "thdas/text.hpp"
#include "thdas/timestamp.hpp"

namespace thdas {

CsvLayout CsvLayout::from_profiles(const ProfileSet& profiles, ChannelMask enabled) {
    CsvLayout layout;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        if (!enabled.test(ch)) {
            continue;
        }
        if (profiles[ch].unit == Unit::celsius && !layout.temperature_channel) {
            layout.temperature_channel = ch;
        }
        if (profiles[ch].unit == Unit::percent_rh && !layout.humidity_channel) {
            layout.humidity_channel = ch;
        }
    }
    return layout;
}

std::string format_flags(const std::array<ReadingFlags, channel_count>& flags) {
    std::string out;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        if (flags[ch] == flag_none) {
            continue;
        }
        if (!out.empty()) {
            out += ';';
        }
        out += "ch" + std::to_string(ch) + ":";
        if (flags[ch] & flag_input_range) {
            out += 'i';
        }
        if (flags[ch] & flag_output_range) {
            out += 'o';
        }
        if (flags[ch] & flag_saturated) {
            out += 's';
        }
    }
    return out;
}

std::optional<std::array<ReadingFlags, channel_count>> parse_flags(std::string_view text) {
    std::array<ReadingFlags, channel_count> flags{};
    for (const auto& tok : split_any(text, ";")) {
        if (tok.size() < 5 || tok.compare(0, 2, "ch") != 0 || tok[3] != ':' || tok[2] < '0' || tok[2] > '3') {
            return std::nullopt;
        }
        const auto ch = static_cast<std::size_t>(tok[2] - '0');
        for (std::size_t i = 4; i < tok.size(); ++i) {
            switch (tok[i]) {
                case 'i': flags[ch] |= flag_input_range; break;
                case 'o': flags[ch] |= flag_output_range; break;
                case 's': flags[ch] |= flag_saturated; break;
                default: return std::nullopt;
            }
        }
    }
    return flags;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_csv_row(const Sample& sample, const CsvLayout& layout) {
    std::string row = format_timestamp(sample.timestamp);
    for (const AdcCode c : sample.raw.codes) {
        row += ',';
        row += std::to_string(c.value());
    }
    row += ',';
    if (layout.temperature_channel) {
        row += format_real(sample.values[*layout.temperature_channel].value);
    }
    row += ',';
    if (layout.humidity_channel) {
        row += format_real(sample.values[*layout.humidity_channel].value);
    }
    row += ',';
    row += format_flags(sample.flags);
    return row;
}

CsvWriter::CsvWriter(std::filesystem::path path, CsvLayout layout, bool append,
                     std::chrono::milliseconds flush_interval)
    : path_(std::move(path)), layout_(layout), flush_interval_(flush_interval) {
    bool need_header = true;
    if (append) {
        std::ifstream existing(path_);
        std::string first;
        if (existing && std::getline(existing, first)) {
            if (trim(first) != csv_header) {
                throw SchemaError("cannot append to '" + path_.string() + "': header does not match the CSV schema");
            }
            need_header = false;
        }
    }
    out_.open(path_, append ? std::ios::app : std::ios::trunc);
    if (!out_) {
        throw IoError("cannot open '" + path_.string() + "' for writing: " + std::strerror(errno));
    }
    if (need_header) {
        out_ << csv_header << '\n';
    }
    last_flush_ = std::chrono::steady_clock::now();
    check("writing header");
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) {
        out_.close();
    }
}

void CsvWriter::check(const char* action) {
    if (!out_) {
        throw IoError("I/O error on '" + path_.string() + "' while " + action + " (data rows written: " +
                      std::to_string(rows_) + ")");
    }
}

void CsvWriter::write(const Sample& sample) {
    out_ << format_csv_row(sample, layout_) << '\n';
    check("writing a row");
    ++rows_;
    const auto now = std::chrono::steady_clock::now();
    if (now - last_flush_ >= flush_interval_) {
        flush();
    }
}

void CsvWriter::flush() {
    out_.flush();
    last_flush_ = std::chrono::steady_clock::now();
    check("flushing");
}

void CsvWriter::close() {
    if (out_.is_open()) {
        flush();
        out_.close();
        check("closing");
    }
}

std::uint64_t write_csv(std::span<const Sample> samples, const std::filesystem::path& path, const CsvLayout& layout,
                        bool append) {
    CsvWriter writer(path, layout, append, std::chrono::hours(1));
    for (const auto& s : samples) {
        writer.write(s);
    }
    writer.close();
    return writer.rows_written();
}

namespace {

constexpr std::array<std::string_view, 8> header_columns = {"timestamp", "ch0_raw", "ch1_raw", "ch2_raw",
                                                            "ch3_raw",   "temp_c",  "rh_pct",  "flags"};

std::optional<Sample> parse_row(std::string_view line, const ProfileSet& profiles, const CsvLayout& layout) {
    const auto fields = split_fields(line, ',');
    if (fields.size() != header_columns.size()) {
        return std::nullopt;
    }
    const auto ts = parse_timestamp(fields[0]);
    if (!ts) {
        return std::nullopt;
    }
    Frame frame;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        const auto v = parse_int(trim(fields[1 + ch]));
        if (!v || *v < 0 || *v > AdcCode::max_value) {
            return std::nullopt;
        }
        frame.codes[ch] = AdcCode(static_cast<int>(*v));
    }
    Sample s = calibrate_frame(frame, profiles, *ts);

    auto take_real = [&](std::string_view field, std::optional<std::size_t> channel) -> bool {
        field = trim(field);
        if (field.empty()) {
            return true;
        }
        const auto v = parse_double(field);
        if (!v || !channel) {
            return false;
        }
        s.values[*channel].value = *v;
        return true;
    };
    if (!take_real(fields[5], layout.temperature_channel) || !take_real(fields[6], layout.humidity_channel)) {
        return std::nullopt;
    }
    const auto flags = parse_flags(trim(fields[7]));
    if (!flags) {
        return std::nullopt;
    }
    s.flags = *flags;
    return s;
}

}  // namespace

CsvReadResult read_csv(const std::filesystem::path& path, const ProfileSet& profiles) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading: " + std::strerror(errno));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("'" + path.string() + "' is empty; expected header '" + std::string(csv_header) + "'");
    }
    const auto header = split_fields(trim(line), ',');
    for (std::size_t i = 0; i < header_columns.size(); ++i) {
        if (i >= header.size() || trim(header[i]) != header_columns[i]) {
            throw SchemaError("'" + path.string() + "': header column " + std::to_string(i + 1) + " should be '" +
                              std::string(header_columns[i]) + "'" +
                              (i < header.size() ? ", found '" + std::string(trim(header[i])) + "'" : ", missing"));
        }
    }
    if (header.size() > header_columns.size()) {
        throw SchemaError("'" + path.string() + "': unexpected extra column '" +
                          std::string(trim(header[header_columns.size()])) + "'");
    }

    const CsvLayout layout = CsvLayout::from_profiles(profiles);
    CsvReadResult result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (auto s = parse_row(line, profiles, layout)) {
            result.samples.push_back(*s);
        } else {
            result.skipped_lines.push_back(line_no);
        }
    }
    if (in.bad()) {
        throw IoError("read error on '" + path.string() + "' at line " + std::to_string(line_no));
    }
    return result;
}

}  // namespace thdas
