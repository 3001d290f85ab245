#include "thdas/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "thdas/acquisition.hpp"
#include "thdas/analysis.hpp"
#include "thdas/csv.hpp"
#include "thdas/device_sim.hpp"
#include "thdas/error.hpp"
#include "thdas/plot.hpp"
#include "thdas/profile_config.hpp"
#include "thdas/text.hpp"
#include "thdas/timestamp.hpp"

namespace thdas {

std::atomic<bool>& cli_stop_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

namespace {

constexpr const char* default_time_base = "2024-01-01T00:00:00.000Z";

struct SimOptions {
    std::string scenario;
    std::string scenario_file;
    std::string temp;
    std::string rh;
    std::string temp_envelope;
    std::string rh_envelope;
    double duration = 0.0;
    double rate = 1.0;
    std::uint64_t count = 0;
    bool realtime = false;
    double noise_lsb = 0.0;
    std::uint64_t seed = 0;
    double ch2 = 0.0;
    double ch3 = 0.0;

    CLI::Option* duration_opt = nullptr;
    CLI::Option* count_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
};

void add_sim_options(CLI::App* sub, SimOptions& o, bool loopback) {
    const std::string group = loopback ? "Loopback simulator" : "Scenario";
    sub->add_option("--scenario", o.scenario, "Shorthand scenario, const:T,RH")->group(group);
    sub->add_option("--scenario-file", o.scenario_file, "Scenario definition file")->group(group);
    sub->add_option("--temp", o.temp, "Temperature source: off | const:V | sin:MEAN,AMP,PERIOD[,PHASE] | csv:PATH:COLUMN")
        ->group(group);
    sub->add_option("--rh", o.rh, "Humidity source, same syntax as --temp")->group(group);
    sub->add_option("--temp-envelope", o.temp_envelope, "Allowed temperature span 'min,max' (default 0,50)")
        ->group(group);
    sub->add_option("--rh-envelope", o.rh_envelope, "Allowed humidity span 'min,max' (default 12,88)")->group(group);
    o.duration_opt = sub->add_option("--duration", o.duration, "Simulated seconds (default: unbounded)")->group(group);
    sub->add_option("--rate", o.rate, "Sample rate in Hz, 0.1 to 1000")->capture_default_str()->group(group);
    o.count_opt = sub->add_option("--count", o.count, "Stop after this many frames")->group(group);
    sub->add_flag("--realtime", o.realtime, "Pace frames by the wall clock instead of as fast as possible")
        ->group(group);
    o.noise_opt = sub->add_option("--noise", o.noise_lsb, "Uniform additive noise, peak in LSB (e.g. 0.5)")
                      ->expected(0, 1)
                      ->default_str("0.5")
                      ->group(group);
    sub->add_option("--seed", o.seed, "Noise seed")->capture_default_str()->group(group);
    sub->add_option("--ch2", o.ch2, "Constant bus voltage on channel 2")->capture_default_str()->group(group);
    sub->add_option("--ch3", o.ch3, "Constant bus voltage on channel 3")->capture_default_str()->group(group);
}

ValueRange parse_pair(const std::string& text, const char* what) {
    const auto parts = split_any(text, ", ");
    std::optional<double> a;
    std::optional<double> b;
    if (parts.size() == 2) {
        a = parse_double(parts[0]);
        b = parse_double(parts[1]);
    }
    if (!a || !b || !(*a < *b)) {
        throw UsageError(std::string(what) + " must be 'min,max' with min < max, got '" + text + "'");
    }
    return {*a, *b};
}

std::pair<AmbientScenario, SimulatorConfig> resolve_sim(const SimOptions& o) {
    AmbientScenario sc;
    if (!o.scenario_file.empty()) {
        sc = load_scenario(o.scenario_file);
    }
    if (!o.scenario.empty()) {
        const AmbientScenario shorthand = parse_scenario_shorthand(o.scenario);
        sc.temperature = shorthand.temperature;
        sc.humidity = shorthand.humidity;
    }
    if (!o.temp.empty()) {
        sc.temperature = parse_source(o.temp);
    }
    if (!o.rh.empty()) {
        sc.humidity = parse_source(o.rh);
    }
    if (!o.temp_envelope.empty()) {
        sc.temperature_envelope = parse_pair(o.temp_envelope, "--temp-envelope");
    }
    if (!o.rh_envelope.empty()) {
        sc.humidity_envelope = parse_pair(o.rh_envelope, "--rh-envelope");
    }
    if (o.duration_opt->count() > 0) {
        sc.duration_s = o.duration;
    }

    SimulatorConfig cfg;
    cfg.sample_rate_hz = o.rate;
    if (o.count_opt->count() > 0) {
        cfg.max_frames = o.count;
    }
    cfg.pacing = o.realtime ? Pacing::wall_clock : Pacing::as_fast_as_possible;
    cfg.device.noise_lsb = o.noise_opt->count() > 0 ? o.noise_lsb : 0.0;
    cfg.device.spare_volts = {o.ch2, o.ch3};
    cfg.seed = o.seed;

    sc.validate();
    cfg.validate();
    return {sc, cfg};
}

Timestamp parse_time_base(const std::string& text) {
    const auto t = parse_timestamp(text);
    if (!t) {
        throw UsageError("bad timestamp '" + text + "', expected YYYY-MM-DDTHH:MM:SS.mmmZ");
    }
    return *t;
}

/// Truth rows share the acquired CSV schema: raw codes as emitted, true
/// temperature and humidity in the engineering columns.
Sample truth_sample(const TickRecord& rec, Timestamp base, const SimulatorConfig& cfg) {
    Sample s;
    s.timestamp = base + std::chrono::round<std::chrono::milliseconds>(std::chrono::duration<double>(rec.t_s));
    s.raw = rec.frame;
    s.values[0] = {rec.celsius.value_or(0.0), Unit::celsius};
    s.values[1] = {rec.percent_rh.value_or(0.0), Unit::percent_rh};
    s.values[2] = {cfg.device.spare_volts[0], Unit::volts};
    s.values[3] = {cfg.device.spare_volts[1], Unit::volts};
    return s;
}

std::string summary_text(const RunSummary& r) {
    std::ostringstream os;
    os << "frames_emitted:  " << r.frames_emitted << "\n"
       << "simulated_s:     " << r.simulated_s << "\n"
       << "ended_by:        " << (r.transport_error ? "transport-error" : r.stopped ? "stopped" : "complete") << "\n";
    if (r.transport_error) {
        os << "error:           " << *r.transport_error << "\n";
    }
    return os.str();
}

struct SimulateCommand {
    SimOptions sim;
    std::string out_path;
    std::string listen;
    std::string truth_path;
    std::string time_base = default_time_base;
    double accept_timeout = 30.0;

    int run(std::ostream& err) const {
        const auto [scenario, cfg] = resolve_sim(sim);
        const Timestamp base = parse_time_base(time_base);
        std::optional<SocketEndpoint> endpoint;
        if (!listen.empty()) {
            endpoint = parse_socket_endpoint(listen);
        }

        std::unique_ptr<ByteSink> sink;
        if (endpoint) {
            TcpListener listener(*endpoint);
            err << "listening on " << listener.host() << ":" << listener.port() << "\n";
            sink = listener.accept(std::chrono::milliseconds(static_cast<long long>(accept_timeout * 1000.0)));
        } else {
            sink = std::make_unique<FileSink>(out_path);
        }

        std::optional<CsvWriter> truth;
        if (!truth_path.empty()) {
            CsvLayout layout;
            if (!std::holds_alternative<DisabledSource>(scenario.temperature)) {
                layout.temperature_channel = 0;
            }
            if (!std::holds_alternative<DisabledSource>(scenario.humidity)) {
                layout.humidity_channel = 1;
            }
            truth.emplace(truth_path, layout);
        }
        const RunSummary r = run_simulator(scenario, cfg, *sink, &cli_stop_flag(), [&](const TickRecord& rec) {
            if (truth) {
                truth->write(truth_sample(rec, base, cfg));
            }
        });
        if (truth) {
            truth->close();
        }
        err << summary_text(r);
        return r.transport_error ? 1 : 0;
    }
};

ChannelMask parse_channels(const std::string& text) {
    ChannelMask mask;
    for (const auto& tok : split_any(text, ", ")) {
        const auto v = parse_int(tok);
        if (!v || *v < 0 || *v >= static_cast<long long>(channel_count)) {
            throw UsageError("bad channel '" + tok + "' in --channels (use 0..3)");
        }
        mask.set(static_cast<std::size_t>(*v));
    }
    if (mask.none()) {
        throw UsageError("--channels must name at least one channel");
    }
    return mask;
}

struct ProcessingOptions {
    std::string csv;
    bool append = false;
    std::string channels = "0,1,2,3";
    double max_duration = 0.0;
    CLI::Option* max_duration_opt = nullptr;
    std::string profiles;
    std::string time_base;
    double time_step = 1.0;
    CLI::Option* time_step_opt = nullptr;
    bool live = true;
};

void add_processing_options(CLI::App* sub, ProcessingOptions& o, bool live_default) {
    o.live = live_default;
    sub->add_option("--csv", o.csv, "Write samples to this CSV file");
    sub->add_flag("--append", o.append, "Append to an existing CSV instead of truncating");
    sub->add_option("--channels", o.channels, "Enabled channels, e.g. 0,1")->capture_default_str();
    o.max_duration_opt = sub->add_option("--max-duration", o.max_duration, "Stop after this many seconds");
    sub->add_option("--profiles", o.profiles, "Channel profile configuration file");
    sub->add_option("--time-base", o.time_base,
                    "Stamp samples base + k*step instead of host receive time (replay default: 2024-01-01T00:00:00.000Z)");
    o.time_step_opt = sub->add_option("--time-step", o.time_step,
                                      "Seconds between synthetic timestamps (loopback default: 1/rate)")
                          ->capture_default_str();
    if (live_default) {
        sub->add_flag("!--quiet", o.live, "Suppress the live readout on standard output");
    } else {
        sub->add_flag("--live", o.live, "Print a live readout line per sample");
    }
}

SessionConfig resolve_session(const ProcessingOptions& o, TransportConfig transport) {
    SessionConfig cfg;
    cfg.transport = std::move(transport);
    if (!o.profiles.empty()) {
        cfg.profiles = load_profiles(o.profiles);
    }
    if (!o.csv.empty()) {
        cfg.csv_path = o.csv;
    }
    cfg.csv_append = o.append;
    cfg.channels_enabled = parse_channels(o.channels);
    if (o.max_duration_opt->count() > 0) {
        cfg.max_duration_s = o.max_duration;
    }
    if (!(o.time_step > 0.0)) {
        throw UsageError("--time-step must be positive");
    }
    cfg.validate();
    return cfg;
}

int run_session(const SessionConfig& cfg, const ProcessingOptions& o, std::ostream& out, std::ostream& err,
                const std::atomic<bool>* stop) {
    std::unique_ptr<SampleClock> clock;
    if (!o.time_base.empty()) {
        clock = std::make_unique<SyntheticClock>(parse_time_base(o.time_base), std::chrono::duration<double>(o.time_step));
    }
    LiveReadoutSink live(out, cfg.channels_enabled);
    std::vector<SampleSink*> sinks;
    if (o.live) {
        sinks.push_back(&live);
    }
    const AcquisitionStats stats = acquire(cfg, sinks, stop, clock.get());
    err << format_stats(stats);
    return stats.error ? 1 : 0;
}

struct AcquireCommand {
    ProcessingOptions proc;
    std::string serial;
    int baud = 9600;
    std::string connect;
    std::string file;
    bool loopback = false;
    SimOptions sim;

    int run(std::ostream& out, std::ostream& err) const {
        const int chosen = (!serial.empty()) + (!connect.empty()) + (!file.empty()) + (loopback ? 1 : 0);
        if (chosen != 1) {
            throw UsageError("choose exactly one of --serial, --connect, --file or --loopback");
        }
        if (!loopback) {
            TransportConfig transport;
            if (!serial.empty()) {
                transport = SerialEndpoint{serial, baud};
            } else if (!connect.empty()) {
                transport = parse_socket_endpoint(connect);
            } else {
                transport = FileEndpoint{file};
            }
            const SessionConfig cfg = resolve_session(proc, transport);
            return run_session(cfg, proc, out, err, &cli_stop_flag());
        }

        // Simulator and acquirer joined over an ephemeral local socket.
        const auto [scenario, sim_cfg] = resolve_sim(sim);
        TcpListener listener(SocketEndpoint{"127.0.0.1", 0});
        ProcessingOptions loop_proc = proc;
        if (loop_proc.time_step_opt->count() == 0) {
            loop_proc.time_step = 1.0 / sim_cfg.sample_rate_hz;
        }
        const SessionConfig cfg = resolve_session(loop_proc, SocketEndpoint{"127.0.0.1", listener.port()});

        std::atomic<bool> sim_stop{false};
        RunSummary sim_summary;
        std::string sim_error;
        std::thread device([&, scenario = scenario, sim_cfg = sim_cfg] {
            try {
                auto sink = listener.accept(std::chrono::seconds(10));
                sim_summary = run_simulator(scenario, sim_cfg, *sink, &sim_stop);
            } catch (const std::exception& e) {
                sim_error = e.what();
            }
        });

        int rc = 0;
        try {
            rc = run_session(cfg, loop_proc, out, err, &cli_stop_flag());
        } catch (...) {
            sim_stop = true;
            device.join();
            throw;
        }
        sim_stop = true;
        device.join();
        if (!sim_error.empty()) {
            err << "simulator: " << sim_error << "\n";
            return 1;
        }
        err << summary_text(sim_summary);
        return rc;
    }
};

// A capture holds no timing, so replayed samples are always stamped
// base + k * step.
struct ReplayCommand {
    ProcessingOptions proc;
    std::string capture;
    double rate = 1.0;
    CLI::Option* rate_opt = nullptr;

    int run(std::ostream& out, std::ostream& err) const {
        ProcessingOptions replay_proc = proc;
        if (replay_proc.time_base.empty()) {
            replay_proc.time_base = default_time_base;
        }
        if (rate_opt->count() > 0) {
            if (!(rate > 0.0)) {
                throw UsageError("--rate must be positive");
            }
            replay_proc.time_step = 1.0 / rate;
        }
        const SessionConfig cfg = resolve_session(replay_proc, FileEndpoint{capture});
        return run_session(cfg, replay_proc, out, err, &cli_stop_flag());
    }
};

struct FitCommand {
    std::string points;
    int degree = 5;

    int run(std::ostream& out, std::ostream& err) const {
        std::ifstream in(points);
        if (!in) {
            throw IoError("cannot open points file '" + points + "'");
        }
        std::vector<double> xs;
        std::vector<double> ys;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string_view l = trim(line);
            if (l.empty() || l.front() == '#') {
                continue;
            }
            const auto fields = split_any(l, ", \t;");
            std::optional<double> x;
            std::optional<double> y;
            if (fields.size() >= 2) {
                x = parse_double(fields[0]);
                y = parse_double(fields[1]);
            }
            if (!x || !y) {
                if (xs.empty() && line_no == 1) {
                    continue;  // header
                }
                throw ContractError(points + ":" + std::to_string(line_no) + ": expected two numbers");
            }
            xs.push_back(*x);
            ys.push_back(*y);
        }
        const auto fit = fit_polynomial<double>(xs, ys, degree);
        if (fit.ill_conditioned) {
            err << "warning: fit is ill-conditioned (reciprocal condition " << fit.reciprocal_condition << ")\n";
        }
        const auto& p = fit.polynomial;
        const Eigen::Map<const Eigen::ArrayXd> xa(xs.data(), static_cast<Eigen::Index>(xs.size()));
        const Eigen::Map<const Eigen::ArrayXd> ya(ys.data(), static_cast<Eigen::Index>(ys.size()));
        const double rms = std::sqrt((eval_polynomial(p, xa) - ya).square().mean());

        char buf[64];
        out << "degree: " << degree << "\npoints: " << xs.size() << "\ndescending:";
        for (Eigen::Index i = p.degree(); i >= 0; --i) {
            std::snprintf(buf, sizeof buf, " %.10g", p.coefficient(i));
            out << buf;
        }
        out << "\nascending:";
        for (Eigen::Index i = 0; i <= p.degree(); ++i) {
            std::snprintf(buf, sizeof buf, " %.10g", p.coefficient(i));
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.6g", rms);
        out << "\nrms_residual: " << buf << "\n";
        return 0;
    }
};

std::array<Unit, channel_count> units_of(const ProfileSet& profiles) {
    std::array<Unit, channel_count> u{};
    for (std::size_t ch = 0; ch < channel_count; ++ch) {
        u[ch] = profiles[ch].unit;
    }
    return u;
}

CsvReadResult read_reporting(const std::string& path, const ProfileSet& profiles, std::ostream& err) {
    CsvReadResult r = read_csv(path, profiles);
    if (!r.skipped_lines.empty()) {
        err << path << ": skipped " << r.skipped_lines.size() << " malformed row(s) at line(s)";
        for (std::size_t i = 0; i < r.skipped_lines.size() && i < 20; ++i) {
            err << " " << r.skipped_lines[i];
        }
        err << (r.skipped_lines.size() > 20 ? " ...\n" : "\n");
    }
    return r;
}

struct CompareCommand {
    std::string a;
    std::string b;
    std::string column = "rh_pct";
    double tolerance = 2.0;
    std::string profiles;

    int run(std::ostream& out, std::ostream& err) const {
        if (!(tolerance >= 0.0)) {
            throw UsageError("--tolerance must be non-negative");
        }
        const ProfileSet prof = profiles.empty() ? default_profiles() : load_profiles(profiles);
        const auto ra = read_reporting(a, prof, err);
        const auto rb = read_reporting(b, prof, err);
        const Series sa = series_from_column(ra.samples, column, a + ":" + column, units_of(prof));
        const Series sb = series_from_column(rb.samples, column, b + ":" + column, units_of(prof));
        const SeriesComparison c = compare_series(sa, sb, tolerance);
        out << format_comparison(c, sa.unit);
        return c.within_tolerance ? 0 : 1;
    }
};

struct PlotCommand {
    std::vector<std::string> inputs;
    std::string columns = "temp_c,rh_pct";
    std::string svg;
    std::string text;
    std::string title = "Reconstructed waveform";
    std::string profiles;

    int run(std::ostream& err) const {
        if (svg.empty() && text.empty()) {
            throw UsageError("plot needs --svg and/or --text");
        }
        const auto cols = split_any(columns, ", ");
        if (cols.empty()) {
            throw UsageError("--columns is empty");
        }
        const ProfileSet prof = profiles.empty() ? default_profiles() : load_profiles(profiles);
        std::vector<Series> series;
        for (const auto& in : inputs) {
            const auto r = read_reporting(in, prof, err);
            for (const auto& col : cols) {
                const std::string label =
                    inputs.size() == 1 ? col : std::filesystem::path(in).stem().string() + ":" + col;
                series.push_back(series_from_column(r.samples, col, label, units_of(prof)));
            }
        }
        PlotOptions opts;
        opts.title = title;
        if (!svg.empty()) {
            write_svg_plot(series, svg, opts);
        }
        if (!text.empty()) {
            write_text_table(series, text);
        }
        return 0;
    }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temperature / humidity data acquisition: device simulator, host logger and analysis tools", "thdas"};
    app.set_config("--config", "", "Read option defaults from an INI/TOML file")->envname("THDAS_CONFIG");
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Print the fully resolved configuration to standard error");
    app.require_subcommand(1);

    SimulateCommand simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "Emulate the acquisition device and emit frames");
    add_sim_options(sim_cmd, simulate.sim, false);
    auto* out_opt = sim_cmd->add_option("--out", simulate.out_path, "Write the byte stream to a file or FIFO");
    auto* listen_opt = sim_cmd->add_option("--listen", simulate.listen, "Serve the byte stream to one TCP client, host:port");
    out_opt->excludes(listen_opt);
    sim_cmd->add_option("--truth", simulate.truth_path, "Also write the true scenario values as CSV");
    sim_cmd->add_option("--time-base", simulate.time_base, "Timestamp of tick 0 in the truth CSV")->capture_default_str();
    sim_cmd->add_option("--accept-timeout", simulate.accept_timeout, "Seconds to wait for a client with --listen")
        ->capture_default_str();

    AcquireCommand acquire_cmd;
    auto* acq = app.add_subcommand("acquire", "Read frames from a device, calibrate, log and display them");
    acq->add_option("--serial", acquire_cmd.serial, "Serial device path (8N1)")->group("Transport");
    acq->add_option("--baud", acquire_cmd.baud, "Serial baud rate")->capture_default_str()->group("Transport");
    acq->add_option("--connect", acquire_cmd.connect, "TCP endpoint host:port")->group("Transport");
    acq->add_option("--file", acquire_cmd.file, "Capture file or FIFO")->group("Transport");
    acq->add_flag("--loopback", acquire_cmd.loopback, "Run the simulator in-process over a local socket")
        ->group("Transport");
    add_processing_options(acq, acquire_cmd.proc, true);
    add_sim_options(acq, acquire_cmd.sim, true);

    ReplayCommand replay;
    auto* rep = app.add_subcommand("replay", "Decode a recorded capture file");
    rep->add_option("capture", replay.capture, "Capture file")->required();
    add_processing_options(rep, replay.proc, false);
    replay.rate_opt = rep->add_option("--rate", replay.rate, "Capture sample rate in Hz; sets --time-step to 1/rate")
                          ->excludes(replay.proc.time_step_opt);

    FitCommand fit;
    auto* fit_cmd = app.add_subcommand("fit", "Least-squares polynomial fit of x,y calibration points");
    fit_cmd->add_option("points", fit.points, "Text/CSV file with x,y per line")->required();
    fit_cmd->add_option("--degree", fit.degree, "Polynomial degree")->capture_default_str()->check(CLI::NonNegativeNumber);

    CompareCommand compare;
    auto* cmp = app.add_subcommand("compare", "Deviation statistics between two recorded series");
    cmp->add_option("reference", compare.a, "Reference CSV (e.g. truth)")->required();
    cmp->add_option("candidate", compare.b, "Candidate CSV (e.g. acquired)")->required();
    cmp->add_option("--column", compare.column, "temp_c | rh_pct | chN | chN_raw")->capture_default_str();
    cmp->add_option("--tolerance", compare.tolerance, "Pass threshold on max |deviation|")->capture_default_str();
    cmp->add_option("--profiles", compare.profiles, "Channel profile configuration file");

    PlotCommand plot;
    auto* plt = app.add_subcommand("plot", "Reconstruct waveforms from CSV files");
    plt->add_option("inputs", plot.inputs, "CSV files")->required();
    plt->add_option("--columns", plot.columns, "Comma-separated columns to draw")->capture_default_str();
    plt->add_option("--svg", plot.svg, "SVG output path");
    plt->add_option("--text", plot.text, "Two-column text output path");
    plt->add_option("--title", plot.title, "Figure title")->capture_default_str();
    plt->add_option("--profiles", plot.profiles, "Channel profile configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (verbose) {
        err << "# resolved configuration\n" << app.config_to_str(true, false);
    }

    try {
        if (sim_cmd->parsed()) {
            if (simulate.out_path.empty() && simulate.listen.empty()) {
                throw UsageError("simulate needs --out or --listen");
            }
            return simulate.run(err);
        }
        if (acq->parsed()) {
            return acquire_cmd.run(out, err);
        }
        if (rep->parsed()) {
            return replay.run(out, err);
        }
        if (fit_cmd->parsed()) {
            return fit.run(out, err);
        }
        if (cmp->parsed()) {
            return compare.run(out, err);
        }
        if (plt->parsed()) {
            return plot.run(err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace thdas
