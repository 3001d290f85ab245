#include "thdas/profile_config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "thdas/error.hpp"
#include "thdas/text.hpp"

namespace thdas {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("profile config line " + std::to_string(line) + ": " + what);
}

double number(const Entry& e) {
    const auto v = parse_double(trim(e.value));
    if (!v) {
        fail(e.line, "expected a number, got '" + e.value + "'");
    }
    return *v;
}

std::vector<double> numbers(const Entry& e) {
    std::vector<double> out;
    for (const auto& tok : split_any(e.value, " ,\t")) {
        const auto v = parse_double(tok);
        if (!v) {
            fail(e.line, "bad number '" + tok + "'");
        }
        out.push_back(*v);
    }
    return out;
}

std::optional<ValueRange> range(const Entry& e) {
    if (trim(e.value) == "none") {
        return std::nullopt;
    }
    const auto v = numbers(e);
    if (v.size() != 2 || !(v[0] <= v[1])) {
        fail(e.line, "range needs 'min, max' with min <= max");
    }
    return ValueRange{v[0], v[1]};
}

Unit unit_from_text(const Entry& e) {
    const std::string u(trim(e.value));
    if (u == "°C" || u == "C" || u == "degC") {
        return Unit::celsius;
    }
    if (u == "%RH" || u == "RH") {
        return Unit::percent_rh;
    }
    if (u == "V") {
        return Unit::volts;
    }
    fail(e.line, "unknown unit '" + u + "'");
}

ChannelProfile preset(const Entry& e, int channel) {
    const std::string name(trim(e.value));
    if (name == "temperature") {
        return temperature_profile(channel);
    }
    if (name == "humidity") {
        return humidity_profile(channel);
    }
    if (name == "raw") {
        return raw_volts_profile(channel);
    }
    fail(e.line, "unknown preset '" + name + "'");
}

ChannelProfile build(int channel, const ChannelProfile& base, std::map<std::string, Entry>& keys) {
    ChannelProfile p = base;
    if (auto it = keys.find("preset"); it != keys.end()) {
        p = preset(it->second, channel);
        keys.erase(it);
    }
    auto take = [&](const char* key) -> std::optional<Entry> {
        auto it = keys.find(key);
        if (it == keys.end()) {
            return std::nullopt;
        }
        Entry e = it->second;
        keys.erase(it);
        return e;
    };

    if (auto e = take("unit")) {
        p.unit = unit_from_text(*e);
    }
    if (auto e = take("adc_full_scale")) {
        p.adc_full_scale = number(*e);
        if (!(p.adc_full_scale > 0.0)) {
            fail(e->line, "adc_full_scale must be positive");
        }
    }
    if (auto e = take("conditioning")) {
        if (trim(e->value) == "identity") {
            p.conditioning_inverse.reset();
        } else {
            const auto v = numbers(*e);
            if (v.size() != 2 || v[0] == 0.0) {
                fail(e->line, "conditioning needs 'gain, offset' with nonzero gain");
            }
            p.conditioning_inverse = LinearMap<double>{v[0], v[1]};
        }
    }

    auto gain = take("gain");
    auto offset = take("offset");
    auto coefficients = take("coefficients");
    std::string kind;
    if (auto e = take("transform")) {
        kind = trim(e->value);
        if (kind != "linear" && kind != "polynomial" && kind != "raw") {
            fail(e->line, "unknown transform '" + kind + "'");
        }
    } else if (gain || offset) {
        kind = "linear";
    } else if (coefficients) {
        kind = "polynomial";
    }

    if (kind == "linear") {
        LinearMap<double> m{1.0, 0.0};
        if (const auto* cur = std::get_if<LinearMap<double>>(&p.transform)) {
            m = *cur;
        }
        if (gain) {
            m.gain = number(*gain);
        }
        if (offset) {
            m.offset = number(*offset);
        }
        if (m.gain == 0.0) {
            fail(gain ? gain->line : 0, "linear transform gain must be nonzero");
        }
        p.transform = m;
    } else if (kind == "polynomial") {
        if (!coefficients) {
            if (!std::holds_alternative<Polynomial<double>>(p.transform)) {
                fail(0, "ch" + std::to_string(channel) + ": polynomial transform needs coefficients");
            }
        } else {
            const auto c = numbers(*coefficients);
            if (c.empty()) {
                fail(coefficients->line, "no coefficients given");
            }
            p.transform = Polynomial<double>::from_descending(std::span<const double>(c));
        }
    } else if (kind == "raw") {
        p.transform = RawVolts{};
    }
    if (kind != "linear" && (gain || offset)) {
        fail((gain ? gain : offset)->line, "gain/offset only apply to a linear transform");
    }
    if (kind != "polynomial" && coefficients) {
        fail(coefficients->line, "coefficients only apply to a polynomial transform");
    }

    if (auto e = take("input_range")) {
        p.input_range = range(*e);
    }
    if (auto e = take("output_range")) {
        p.output_range = range(*e);
    }
    if (auto e = take("physical_range")) {
        p.physical_range = range(*e);
    }

    if (!keys.empty()) {
        const auto& [key, e] = *keys.begin();
        fail(e.line, "unknown key 'ch" + std::to_string(channel) + "." + key + "'");
    }
    return p;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ProfileSet parse_profiles(std::string_view text) {
    std::array<std::map<std::string, Entry>, channel_count> keys;
    int line_no = 0;
    for (const auto& raw_line : split_lines(text)) {
        ++line_no;
        std::string_view line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected 'chN.key = value'");
        }
        const std::string_view lhs = trim(line.substr(0, eq));
        const std::string_view rhs = trim(line.substr(eq + 1));
        if (lhs.size() < 5 || lhs.substr(0, 2) != "ch" || lhs[3] != '.' || lhs[2] < '0' || lhs[2] > '3') {
            fail(line_no, "key must look like 'chN.name' with N in 0..3");
        }
        const auto ch = static_cast<std::size_t>(lhs[2] - '0');
        const std::string key(lhs.substr(4));
        if (keys[ch].count(key) != 0) {
            fail(line_no, "duplicate key '" + std::string(lhs) + "'");
        }
        keys[ch][key] = Entry{std::string(rhs), line_no};
    }

    ProfileSet defaults = default_profiles();
    ProfileSet out;
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        out[ch] = build(static_cast<int>(ch), defaults[ch], keys[ch]);
    }
    return out;
}

ProfileSet load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open profile config '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profiles(buf.str());
}

std::string format_profiles(const ProfileSet& profiles) {
    std::ostringstream os;
    for (const auto& p : profiles) {
        const std::string k = "ch" + std::to_string(p.channel) + ".";
        os << k << "unit = " << unit_symbol(p.unit) << "\n";
        os << k << "adc_full_scale = " << fmt_double(p.adc_full_scale) << "\n";
        if (p.conditioning_inverse) {
            os << k << "conditioning = " << fmt_double(p.conditioning_inverse->gain) << ", "
               << fmt_double(p.conditioning_inverse->offset) << "\n";
        } else {
            os << k << "conditioning = identity\n";
        }
        if (const auto* m = std::get_if<LinearMap<double>>(&p.transform)) {
            os << k << "transform = linear\n";
            os << k << "gain = " << fmt_double(m->gain) << "\n";
            os << k << "offset = " << fmt_double(m->offset) << "\n";
        } else if (const auto* poly = std::get_if<Polynomial<double>>(&p.transform)) {
            os << k << "transform = polynomial\n" << k << "coefficients =";
            for (Eigen::Index i = poly->degree(); i >= 0; --i) {
                os << " " << fmt_double(poly->coefficient(i));
            }
            os << "\n";
        } else {
            os << k << "transform = raw\n";
        }
        auto put_range = [&](const char* name, const std::optional<ValueRange>& r) {
            os << k << name << " = ";
            if (r) {
                os << fmt_double(r->min) << ", " << fmt_double(r->max) << "\n";
            } else {
                os << "none\n";
            }
        };
        put_range("input_range", p.input_range);
        put_range("output_range", p.output_range);
        put_range("physical_range", p.physical_range);
    }
    return os.str();
}

}  // namespace thdas
