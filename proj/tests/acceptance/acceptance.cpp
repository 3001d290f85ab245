// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "thdas/acquisition.hpp"
#include "thdas/analysis.hpp"
#include "thdas/calibration.hpp"
#include "thdas/csv.hpp"
#include "thdas/device_sim.hpp"
#include "thdas/polynomial.hpp"
#include "thdas/protocol.hpp"
#include "thdas/timestamp.hpp"
#include "thdas/transport.hpp"

using namespace thdas;
using namespace std::chrono_literals;

namespace {

// Highest degree first, as printed.
constexpr std::array<double, 6> rh_descending{15.538, -161.37, 655.54, -1289.1, 1259.3, -472.15};

double rh_term_by_term(double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rh_descending.size(); ++i) {
        sum += rh_descending[i] * std::pow(x, static_cast<double>(5 - i));
    }
    return sum;
}

double rh_slope_term_by_term(double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const double power = static_cast<double>(5 - i);
        sum += power * rh_descending[i] * std::pow(x, power - 1.0);
    }
    return sum;
}

Timestamp base_time() { return *parse_timestamp("2024-01-01T00:00:00.000Z"); }

Frame random_frame(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> code(0, 1023);
    return Frame::from_values(code(rng), code(rng), code(rng), code(rng));
}

class Criterion {
public:
    explicit Criterion(std::ostringstream& log) : log_(log) {}

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed_ = false;
            log_ << "    failed: " << what << "\n";
        }
    }
    bool passed() const { return passed_; }

private:
    std::ostringstream& log_;
    bool passed_ = true;
};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() / ("thdas_acceptance_" + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

// Simulator on one thread serving a local TCP socket; acquirer on this one.
struct SocketSession {
    std::vector<TickRecord> truth;
    AcquisitionStats stats;
    RunSummary sim;
    std::string sim_error;
};

SocketSession run_over_socket(const AmbientScenario& scenario, const SimulatorConfig& sim_cfg,
                              const SessionConfig& base_cfg, std::span<SampleSink* const> sinks) {
    SocketSession out;
    TcpListener listener(SocketEndpoint{"127.0.0.1", 0});
    std::thread device([&] {
        try {
            auto sink = listener.accept(10s);
            out.sim = run_simulator(scenario, sim_cfg, *sink, nullptr,
                                    [&](const TickRecord& t) { out.truth.push_back(t); });
        } catch (const std::exception& e) {
            out.sim_error = e.what();
        }
    });
    SessionConfig cfg = base_cfg;
    cfg.transport = SocketEndpoint{"127.0.0.1", listener.port()};
    SyntheticClock clock(base_time(), std::chrono::duration<double>(1.0 / sim_cfg.sample_rate_hz));
    try {
        out.stats = acquire(cfg, sinks, nullptr, &clock);
    } catch (...) {
        device.join();
        throw;
    }
    device.join();
    return out;
}

Timestamp tick_time(const TickRecord& t) {
    return base_time() + std::chrono::milliseconds(std::llround(t.t_s * 1000.0));
}

void polynomial_evaluation(Criterion& c) {
    const auto& p = rh_calibration_polynomial();
    const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(10001, 1.0, 3.0);
    const Eigen::ArrayXd ys = eval_polynomial(p, xs);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        const double ref = rh_term_by_term(xs[i]);
        worst = std::max(worst, std::abs(ys[i] - ref) / std::max(std::abs(ref), 1e-300));
        worst = std::max(worst, std::abs(p(xs[i]) - ref) / std::max(std::abs(ref), 1e-300));
    }
    c.require(worst <= 1e-9, "relative error vs term-by-term sum " + std::to_string(worst));
    c.require(std::abs(p(1.0) - 7.758) < 1e-9, "p(1) = 7.758");
    c.require(std::abs(p(2.0) - 49.666) < 1e-9, "p(2) = 49.666");
}

void socket_round_trip(Criterion& c) {
    AmbientScenario scenario;
    scenario.temperature = SinusoidSource{25.0, 20.0, 60.0, 0.0};
    scenario.humidity = SinusoidSource{50.0, 35.0, 45.0, 0.7};
    scenario.validate();
    SimulatorConfig sim;
    sim.sample_rate_hz = 10.0;
    sim.max_frames = 1000;
    CollectingSink collected;
    SampleSink* sinks[] = {&collected};
    const auto s = run_over_socket(scenario, sim, SessionConfig{}, sinks);
    c.require(s.sim_error.empty(), "simulator error: " + s.sim_error);
    c.require(s.truth.size() == 1000, "1000 ticks simulated");
    c.require(s.stats.frames_ok == 1000, "1000 frames acquired, got " + std::to_string(s.stats.frames_ok));
    if (s.truth.empty() || collected.samples().empty()) {
        c.require(false, "nothing to compare");
        return;
    }

    std::vector<Timestamp> times;
    std::vector<double> celsius;
    std::vector<double> rh;
    for (const auto& t : s.truth) {
        times.push_back(tick_time(t));
        celsius.push_back(*t.celsius);
        rh.push_back(*t.percent_rh);
    }
    const Series t_truth = make_series("truth", Unit::celsius, times, celsius);
    const Series h_truth = make_series("truth", Unit::percent_rh, times, rh);
    const auto t_cmp = compare_series(t_truth, series_from_samples(collected.samples(), 0, "acquired"), 0.05);
    const auto h_cmp = compare_series(h_truth, series_from_samples(collected.samples(), 1, "acquired"), 0.5);
    c.require(t_cmp.n_compared == 1000 && h_cmp.n_compared == 1000, "every tick aligned");
    c.require(t_cmp.within_tolerance, "temperature max_abs_dev " + std::to_string(t_cmp.max_abs_dev) + " <= 0.05");
    c.require(h_cmp.within_tolerance, "humidity max_abs_dev " + std::to_string(h_cmp.max_abs_dev) + " <= 0.5");
}

void lossless_stream(Criterion& c) {
    TempDir dir;
    AmbientScenario scenario;
    scenario.temperature = SinusoidSource{25.0, 20.0, 37.0, 0.0};
    scenario.humidity = SinusoidSource{50.0, 30.0, 53.0, 0.0};
    SimulatorConfig sim;
    sim.sample_rate_hz = 100.0;
    sim.max_frames = 10000;
    sim.device.noise_lsb = 0.5;
    sim.seed = 3;
    SessionConfig cfg;
    cfg.csv_path = dir.path / "stream.csv";
    const auto s = run_over_socket(scenario, sim, cfg, {});
    c.require(s.sim_error.empty(), "simulator error: " + s.sim_error);
    c.require(s.stats.frames_ok == 10000, "frames_ok = " + std::to_string(s.stats.frames_ok));
    c.require(s.stats.frames_rejected == 0, "frames_rejected = " + std::to_string(s.stats.frames_rejected));
    c.require(!s.stats.error, "session error");
    const auto back = read_csv(*cfg.csv_path);
    c.require(back.samples.size() == 10000, "CSV rows = " + std::to_string(back.samples.size()));
    c.require(back.skipped_lines.empty(), "no unreadable CSV rows");
    bool same = back.samples.size() == s.truth.size();
    for (std::size_t i = 0; same && i < back.samples.size(); ++i) {
        same = back.samples[i].raw == s.truth[i].frame;
    }
    c.require(same, "CSV rows carry the emitted codes in order");
}

void resync(Criterion& c) {
    constexpr std::size_t n = 10000;
    constexpr std::size_t bursts = 50;
    std::mt19937_64 rng(20240101);
    std::vector<Frame> original;
    std::string capture;
    for (std::size_t i = 0; i < n; ++i) {
        original.push_back(random_frame(rng));
        capture += encode_frame(original.back());
    }

    // One burst of 2..16 random bytes inside each of 50 disjoint windows.
    // touched marks records overwritten or merged into an overwritten one.
    std::vector<bool> touched(n, false);
    const std::size_t window = capture.size() / bursts;
    std::uniform_int_distribution<int> len_dist(2, 16);
    std::uniform_int_distribution<int> byte(0, 255);
    for (std::size_t b = 0; b < bursts; ++b) {
        const std::size_t len = static_cast<std::size_t>(len_dist(rng));
        std::uniform_int_distribution<std::size_t> off(0, window - len);
        const std::size_t start = b * window + off(rng);
        for (std::size_t k = 0; k < len; ++k) {
            const std::size_t at = start + k;
            capture[at] = static_cast<char>(byte(rng));
            touched[at / record_size] = true;
            // A lost delimiter merges the following record into this one.
            if (at % record_size == record_size - 1 && at / record_size + 1 < n) {
                touched[at / record_size + 1] = true;
            }
        }
    }

    FrameDecoder decoder;
    std::vector<Frame> decoded;
    std::uniform_int_distribution<std::size_t> cut(1, 300);
    for (std::size_t pos = 0; pos < capture.size();) {
        const std::size_t len = std::min(cut(rng), capture.size() - pos);
        decoder.decode_chunk(std::string_view(capture).substr(pos, len), decoded);
        pos += len;
    }

    const auto& d = decoder.diagnostics();
    c.require(d.frames_rejected <= 2 * bursts, "frames_rejected = " + std::to_string(d.frames_rejected));
    c.require(n - decoded.size() <= 2 * bursts, "frames lost = " + std::to_string(n - decoded.size()));

    // Each decoded frame must be the next untouched original, or a touched
    // original that survived byte-identical.
    std::size_t j = 0;
    bool aligned = true;
    for (const Frame& f : decoded) {
        while (j < n && touched[j] && !(original[j] == f)) {
            ++j;
        }
        if (j == n || !(original[j] == f)) {
            aligned = false;
            break;
        }
        ++j;
    }
    c.require(aligned, "every surviving frame equals its original, in order");
    const auto untouched = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
    c.require(decoded.size() >= untouched, "no untouched record lost");
}

void codec_properties(Criterion& c) {
    std::mt19937_64 rng(5);
    FrameDecoder single;
    bool round_trip = true;
    for (int i = 0; i < 10000 && round_trip; ++i) {
        const Frame f = random_frame(rng);
        const std::string bytes = encode_frame(f);
        const auto r = single.decode_chunk(bytes);
        round_trip = bytes.size() == record_size && r.frames.size() == 1 && r.frames[0] == f;
    }
    c.require(round_trip, "encode/decode round trip over 10000 frames");

    std::string stream;
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 10000; ++i) {
        if (i % 37 == 0) {
            for (int k = byte(rng) % 24; k > 0; --k) {
                stream.push_back(static_cast<char>(byte(rng)));
            }
        }
        stream += encode_frame(random_frame(rng));
    }
    FrameDecoder whole_decoder;
    const auto whole = whole_decoder.decode_chunk(stream);
    bool invariant = true;
    for (int trial = 0; trial < 100 && invariant; ++trial) {
        std::uniform_int_distribution<std::size_t> cut(0, trial < 50 ? 20 : 5000);
        FrameDecoder parts;
        std::vector<Frame> frames;
        for (std::size_t pos = 0; pos < stream.size();) {
            const std::size_t len = std::min(cut(rng), stream.size() - pos);
            parts.decode_chunk(std::string_view(stream).substr(pos, len), frames);
            pos += len;
        }
        invariant = frames == whole.frames && parts.diagnostics() == whole_decoder.diagnostics();
    }
    c.require(invariant, "chunking invariance over 100 random partitions");

    std::string fuzz(1 << 20, '\0');
    for (auto& ch : fuzz) {
        ch = static_cast<char>(byte(rng));
    }
    FrameDecoder fuzzed;
    bool survived = true;
    try {
        std::uniform_int_distribution<std::size_t> cut(1, 4096);
        for (std::size_t pos = 0; pos < fuzz.size();) {
            const std::size_t len = std::min(cut(rng), fuzz.size() - pos);
            fuzzed.decode_chunk(std::string_view(fuzz).substr(pos, len));
            pos += len;
        }
        const auto after = fuzzed.decode_chunk("\n0001000200030004\n");
        survived = after.frames.size() == 1 && after.frames[0] == Frame::from_values(1, 2, 3, 4);
    } catch (...) {
        survived = false;
    }
    c.require(survived, "1 MiB of random bytes decoded without error, decoder recovers afterwards");
}

void fit_recovery(Criterion& c) {
    const auto& p = rh_calibration_polynomial();
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i <= 20; ++i) {
        xs.push_back(1.0 + 0.1 * i);
        ys.push_back(rh_term_by_term(xs.back()));
    }
    const auto fit = fit_polynomial<double>(xs, ys, 5);
    double worst = 0.0;
    for (Eigen::Index i = 0; i <= 5; ++i) {
        worst = std::max(worst, std::abs(fit.polynomial.coefficient(i) - p.coefficient(i)) / std::abs(p.coefficient(i)));
    }
    c.require(fit.polynomial.degree() == 5, "degree 5");
    c.require(worst <= 1e-6, "worst relative coefficient error " + std::to_string(worst));

    const std::vector<double> tx{0.0, 1.0, 2.0};
    const std::vector<double> ty{0.3, 1.1, 2.6};
    const auto toy = fit_polynomial<double>(tx, ty, 1);
    const auto sse = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < tx.size(); ++i) {
            s += std::pow(ty[i] - (a + b * tx[i]), 2);
        }
        return s;
    };
    const double a0 = toy.polynomial.coefficient(0);
    const double b0 = toy.polynomial.coefficient(1);
    const double best = sse(a0, b0);
    bool beaten = false;
    for (int i = -100; i <= 100 && !beaten; ++i) {
        for (int j = -100; j <= 100 && !beaten; ++j) {
            beaten = sse(a0 * (1 + 0.001 * i), b0 * (1 + 0.001 * j)) < best - 1e-15;
        }
    }
    c.require(!beaten, "no +-10% perturbation lowers the squared residual");
}

void monotone_inversion(Criterion& c) {
    const auto& p = rh_calibration_polynomial();
    bool positive = true;
    for (int i = 0; i < 1000; ++i) {
        positive = positive && rh_slope_term_by_term(1.0 + 2.0 * i / 999.0) > 0.0;
    }
    c.require(positive, "derivative positive at 1000 points");
    c.require(monotone_direction(p, 1.0, 3.0, 1000) == 1, "library agrees the polynomial increases");
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double y = 8.0 + 100.0 * i / 10000.0;
        worst = std::max(worst, std::abs(p(invert_monotone(p, y, 1.0, 3.0)) - y));
    }
    c.require(worst <= 1e-6, "max |eval(invert(y)) - y| = " + std::to_string(worst));
}

void saturation(Criterion& c) {
    AmbientScenario scenario;
    scenario.temperature = ConstantSource{60.0};
    scenario.temperature_envelope = {0.0, 70.0};
    scenario.validate();
    c.require(std::abs(apply_chain(temperature_chain, lm35_voltage(60.0)) - 5.1) < 1e-12,
              "6.0 V conditioned output is clamped");
    c.require(std::abs(temperature_chain.gain * lm35_voltage(60.0) - 6.0) < 1e-12, "pre-clamp voltage is 6.0 V");

    SimulatorConfig sim;
    sim.max_frames = 100;
    StringSink wire;
    run_simulator(scenario, sim, wire);
    bool well_formed = wire.data().size() == 100 * record_size;
    for (std::size_t i = 0; well_formed && i < 100; ++i) {
        const std::string_view rec = std::string_view(wire.data()).substr(i * record_size, record_size);
        well_formed = rec.back() == '\n' &&
                      std::all_of(rec.begin(), rec.end() - 1, [](char ch) { return ch >= '0' && ch <= '9'; });
    }
    c.require(well_formed, "every record is 16 digits and LF");

    StringSource src(wire.data());
    CollectingSink samples;
    SampleSink* sinks[] = {&samples};
    SyntheticClock clock(base_time(), 1s);
    const auto stats = acquire_from(src, SessionConfig{}, sinks, nullptr, &clock);
    c.require(stats.frames_ok == 100 && stats.frames_rejected == 0, "all frames decode");
    bool saturated = !samples.samples().empty();
    for (const Sample& s : samples.samples()) {
        saturated = saturated && s.raw.codes[0].value() == 1023 && (s.flags[0] & flag_saturated) != 0;
    }
    c.require(saturated, "ch0 code 1023 and flagged saturated");
}

void csv_round_trip(Criterion& c) {
    TempDir dir;
    std::mt19937_64 rng(9);
    std::vector<Sample> samples;
    const auto profiles = default_profiles();
    Timestamp t = base_time();
    std::uniform_int_distribution<int> step(1, 60000);
    for (int i = 0; i < 1000; ++i) {
        samples.push_back(calibrate_frame(random_frame(rng), profiles, t));
        t += std::chrono::milliseconds(step(rng));
    }
    const auto path = dir.path / "session.csv";
    const auto rows = write_csv(samples, path, CsvLayout::from_profiles(profiles));
    const auto back = read_csv(path, profiles);
    c.require(rows == 1000 && back.samples.size() == 1000, "1000 rows written and read");
    bool raw = back.samples.size() == samples.size();
    bool reals = raw;
    for (std::size_t i = 0; raw && i < samples.size(); ++i) {
        raw = back.samples[i].raw == samples[i].raw && back.samples[i].timestamp == samples[i].timestamp &&
              back.samples[i].flags == samples[i].flags;
        for (std::size_t ch = 0; ch < channel_count; ++ch) {
            const double a = samples[i].values[ch].value;
            const double b = back.samples[i].values[ch].value;
            reals = reals && (a == b || std::abs(a - b) <= 5e-6 * std::max(std::abs(a), std::abs(b)));
        }
    }
    c.require(raw, "raw codes, timestamps and flags bit-exact");
    c.require(reals, "engineering values to 6 significant digits");
}

struct Entry {
    int id;
    const char* name;
    std::chrono::milliseconds limit;
    std::function<void(Criterion&)> run;
};

}  // namespace

int main() {
    const std::vector<Entry> entries{
        {1, "RH polynomial evaluation matches term-by-term oracle", 1s, polynomial_evaluation},
        {2, "socket round trip recovers truth within 0.05 degC / 0.5 %RH", 10s, socket_round_trip},
        {3, "10000 frames at 100 Hz equivalent, lossless into CSV", 30s, lossless_stream},
        {4, "decoder resynchronizes after 50 corruption bursts", 0ms, resync},
        {5, "codec round trip, chunking invariance, 1 MiB fuzz", 0ms, codec_properties},
        {6, "degree-5 fit recovers the calibration coefficients", 0ms, fit_recovery},
        {7, "RH polynomial monotone on [1,3], inversion identity on [8,108]", 0ms, monotone_inversion},
        {8, "6.0 V conditioned input saturates to a flagged 1023", 0ms, saturation},
        {9, "1000-sample CSV write/read round trip", 0ms, csv_round_trip},
    };

    int failures = 0;
    for (const auto& e : entries) {
        std::ostringstream log;
        Criterion c(log);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.run(c);
        } catch (const std::exception& ex) {
            c.require(false, std::string("exception: ") + ex.what());
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        if (e.limit.count() > 0) {
            c.require(elapsed < e.limit, "runtime " + std::to_string(elapsed.count()) + " ms over limit " +
                                             std::to_string(e.limit.count()) + " ms");
        }
        failures += c.passed() ? 0 : 1;
        std::printf("%s  %d  %s  (%lld ms)\n", c.passed() ? "PASS" : "FAIL", e.id, e.name,
                    static_cast<long long>(elapsed.count()));
        std::fputs(log.str().c_str(), stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failures, entries.size());
    return failures == 0 ? 0 : 1;
}
