#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "thdas/cli.hpp"
#include "thdas/csv.hpp"

using namespace thdas;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "thdas");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::size_t data_rows(const std::filesystem::path& csv) {
    const std::string text = test::read_file(csv);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 2") {
    const auto r = cli({});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("simulate then replay gives one row per frame") {
    test::TempDir dir;
    const auto cap = (dir / "capture.bin").string();
    const auto csv = (dir / "out.csv").string();
    REQUIRE(cli({"simulate", "--scenario", "const:25,50", "--rate", "10", "--count", "100", "--out", cap}).code == 0);
    CHECK(std::filesystem::file_size(cap) == 100 * 17);
    const auto r = cli({"replay", cap, "--csv", csv});
    REQUIRE(r.code == 0);
    CHECK(data_rows(csv) == 100);
    CHECK(r.err.find("frames_ok:       100") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("compare truth against the acquired series") {
    test::TempDir dir;
    const auto cap = (dir / "capture.bin").string();
    const auto truth = (dir / "truth.csv").string();
    const auto acquired = (dir / "acquired.csv").string();
    REQUIRE(cli({"simulate", "--temp", "sin:25,20,60", "--rh", "sin:50,35,90", "--rate", "10", "--count", "600", "--out",
                 cap, "--truth", truth})
                .code == 0);
    REQUIRE(cli({"replay", cap, "--rate", "10", "--csv", acquired}).code == 0);

    const auto ok = cli({"compare", truth, acquired, "--column", "rh_pct", "--tolerance", "2.0"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("within_tolerance: true") != std::string::npos);
    CHECK(ok.out.find("max_abs_dev") != std::string::npos);

    CHECK(cli({"compare", truth, acquired, "--column", "temp_c", "--tolerance", "0.05"}).code == 0);
    const auto tight = cli({"compare", truth, acquired, "--column", "rh_pct", "--tolerance", "0.001"});
    CHECK(tight.code == 1);
    CHECK(tight.out.find("within_tolerance: false") != std::string::npos);
}

TEST_CASE("acquire over the loopback socket") {
    test::TempDir dir;
    const auto csv = (dir / "loop.csv").string();
    const auto r = cli({"acquire", "--loopback", "--scenario", "const:20,40", "--rate", "50", "--count", "200", "--csv",
                        csv, "--time-base", "2024-01-01T00:00:00.000Z", "--quiet"});
    CHECK(r.code == 0);
    CHECK(data_rows(csv) == 200);
    CHECK(r.out.empty());
    const auto back = read_csv(csv);
    REQUIRE(back.samples.size() == 200);
    CHECK(back.samples[1].timestamp - back.samples[0].timestamp == std::chrono::milliseconds(20));
}

TEST_CASE("acquire prints a live readout by default") {
    test::TempDir dir;
    const auto cap = (dir / "c.bin").string();
    REQUIRE(cli({"simulate", "--scenario", "const:25,50", "--count", "3", "--out", cap}).code == 0);
    const auto r = cli({"acquire", "--file", cap, "--channels", "0,1"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
    CHECK(r.out.find("ch0 25.02 °C  ch1 50.0 %RH") != std::string::npos);
}

TEST_CASE("usage errors touch no data files") {
    test::TempDir dir;
    const auto out = dir / "x.bin";
    const auto csv = dir / "x.csv";
    CHECK(cli({"simulate", "--bogus", "--out", out.string()}).code == 2);
    CHECK(cli({"simulate", "--rate", "5000", "--count", "5", "--out", out.string()}).code == 2);
    CHECK(cli({"simulate", "--temp", "sin:25,40,60", "--count", "5", "--out", out.string()}).code == 2);
    CHECK(cli({"simulate", "--count", "5"}).code == 2);
    CHECK_FALSE(std::filesystem::exists(out));

    REQUIRE(cli({"simulate", "--count", "5", "--out", out.string()}).code == 0);
    CHECK(cli({"replay", out.string(), "--csv", csv.string(), "--channels", "7"}).code == 2);
    CHECK(cli({"replay", out.string(), "--csv", csv.string(), "--time-step", "0"}).code == 2);
    CHECK(cli({"acquire", "--file", out.string(), "--loopback", "--csv", csv.string()}).code == 2);
    CHECK(cli({"acquire", "--serial", "/dev/null", "--baud", "1234", "--csv", csv.string()}).code == 2);
    CHECK(cli({"plot", out.string()}).code == 2);
    CHECK_FALSE(std::filesystem::exists(csv));
}

TEST_CASE("domain errors exit 1") {
    test::TempDir dir;
    const auto csv = dir / "x.csv";
    CHECK(cli({"replay", (dir / "missing.bin").string(), "--csv", csv.string()}).code == 1);
    CHECK_FALSE(std::filesystem::exists(csv));
    test::write_file(dir / "bad.csv", "not,a,valid,header\n");
    CHECK(cli({"compare", (dir / "bad.csv").string(), (dir / "bad.csv").string()}).code == 1);
}

TEST_CASE("fit prints the recovered coefficients") {
    test::TempDir dir;
    std::ostringstream pts;
    pts << "x,y\n";
    for (int i = 0; i <= 10; ++i) {
        const double x = 1.0 + 0.2 * i;
        pts.precision(17);
        pts << x << "," << (((((15.538 * x - 161.37) * x + 655.54) * x - 1289.1) * x + 1259.3) * x - 472.15) << "\n";
    }
    test::write_file(dir / "pts.csv", pts.str());
    const auto r = cli({"fit", (dir / "pts.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("descending: 15.538 -161.37 655.54 -1289.1 1259.3 -472.15") != std::string::npos);
    CHECK(cli({"fit", (dir / "pts.csv").string(), "--degree", "20"}).code == 1);
}

TEST_CASE("plot writes svg and text outputs") {
    test::TempDir dir;
    const auto cap = (dir / "c.bin").string();
    const auto csv = (dir / "c.csv").string();
    REQUIRE(cli({"simulate", "--temp", "sin:25,10,30", "--count", "60", "--out", cap}).code == 0);
    REQUIRE(cli({"replay", cap, "--csv", csv}).code == 0);
    const auto svg = dir / "p.svg";
    const auto txt = dir / "p.txt";
    CHECK(cli({"plot", csv, "--svg", svg.string(), "--text", txt.string(), "--title", "run"}).code == 0);
    const std::string s = test::read_file(svg);
    CHECK(std::count(s.begin(), s.end(), '\n') > 5);
    CHECK(s.find("<polyline") != std::string::npos);
    CHECK(s.find(">run<") != std::string::npos);
    CHECK(test::read_file(txt).rfind("# ", 0) == 0);
}

TEST_CASE("runs are deterministic") {
    test::TempDir dir;
    const std::vector<std::string> sim{"simulate", "--temp", "sin:25,10,30", "--noise", "--seed", "7", "--count", "300"};
    auto a = sim;
    a.insert(a.end(), {"--out", (dir / "a.bin").string()});
    auto b = sim;
    b.insert(b.end(), {"--out", (dir / "b.bin").string()});
    REQUIRE(cli(a).code == 0);
    REQUIRE(cli(b).code == 0);
    CHECK(test::read_file(dir / "a.bin") == test::read_file(dir / "b.bin"));
    REQUIRE(cli({"replay", (dir / "a.bin").string(), "--csv", (dir / "a.csv").string()}).code == 0);
    REQUIRE(cli({"replay", (dir / "b.bin").string(), "--csv", (dir / "b.csv").string()}).code == 0);
    CHECK(test::read_file(dir / "a.csv") == test::read_file(dir / "b.csv"));
}

TEST_CASE("config file supplies defaults and flags override it") {
    test::TempDir dir;
    test::write_file(dir / "thdas.ini", "[simulate]\ncount=5\nrate=10\n");
    const auto out = (dir / "o.bin").string();
    REQUIRE(cli({"--config", (dir / "thdas.ini").string(), "simulate", "--out", out}).code == 0);
    CHECK(std::filesystem::file_size(out) == 5 * 17);
    const auto r = cli({"--config", (dir / "thdas.ini").string(), "-v", "simulate", "--count", "3", "--out", out});
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::file_size(out) == 3 * 17);
    CHECK(r.err.find("count=3") != std::string::npos);
    CHECK(r.err.find("rate=10") != std::string::npos);
}
