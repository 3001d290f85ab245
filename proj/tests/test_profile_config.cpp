#include <doctest.h>

#include "test_support.hpp"
#include "thdas/error.hpp"
#include "thdas/profile_config.hpp"

using namespace thdas;

TEST_CASE("empty configuration yields the default profiles") {
    const auto p = parse_profiles("# nothing\n\n");
    CHECK(p[0].unit == Unit::celsius);
    CHECK(p[1].unit == Unit::percent_rh);
    CHECK(p[2].unit == Unit::volts);
    CHECK(std::holds_alternative<Polynomial<double>>(p[1].transform));
}

TEST_CASE("keys override fields") {
    const auto p = parse_profiles(R"(
ch2.preset = temperature
ch2.gain = 20   # doubled
ch3.preset = humidity
ch3.coefficients = 1 2 3
ch3.output_range = none
ch0.adc_full_scale = 3.3
)");
    CHECK(p[2].unit == Unit::celsius);
    REQUIRE(std::holds_alternative<LinearMap<double>>(p[2].transform));
    CHECK(std::get<LinearMap<double>>(p[2].transform).gain == 20.0);
    const auto& poly = std::get<Polynomial<double>>(p[3].transform);
    CHECK(poly.degree() == 2);
    CHECK(poly.coefficient(0) == 3.0);
    CHECK_FALSE(p[3].output_range.has_value());
    CHECK(p[0].adc_full_scale == 3.3);
}

TEST_CASE("malformed configuration names the line") {
    const auto fails_on = [](const char* text, const char* needle) {
        try {
            parse_profiles(text);
        } catch (const ConfigError& e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_on("\nch9.unit = V\n", "line 2"));
    CHECK(fails_on("ch0.colour = red\n", "line 1"));
    CHECK(fails_on("ch0.gain = 1\nch0.gain = 2\n", "line 2"));
    CHECK(fails_on("ch0.gain = abc\n", "line 1"));
    CHECK(fails_on("just words\n", "line 1"));
}

TEST_CASE("property: format then parse round trips") {
    auto original = default_profiles();
    original[2] = humidity_profile(2);
    original[3] = temperature_profile(3);
    original[3].transform = LinearMap<double>{12.5, -3.0};
    original[3].input_range.reset();
    const auto parsed = parse_profiles(format_profiles(original));
    CHECK(format_profiles(parsed) == format_profiles(original));

    const Frame f = Frame::from_values(100, 700, 650, 900);
    const auto a = calibrate_frame(f, original, Timestamp{});
    const auto b = calibrate_frame(f, parsed, Timestamp{});
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        CHECK(a.values[ch].value == doctest::Approx(b.values[ch].value).epsilon(1e-12));
        CHECK(a.flags[ch] == b.flags[ch]);
    }
}

TEST_CASE("load_profiles reads a file and reports a missing one") {
    test::TempDir dir;
    test::write_file(dir / "p.conf", "ch1.preset = raw\n");
    CHECK(load_profiles(dir / "p.conf")[1].unit == Unit::volts);
    CHECK_THROWS_AS(load_profiles(dir / "missing.conf"), ConfigError);
}
