#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rcdtpod/io.hpp"
#include "rcdtpod/rcdt.hpp"
#include "rcdtpod/rom.hpp"

using namespace rcdtpod;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(RCDTPOD_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rcdtpod_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string last_field(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    return last.substr(last.rfind(',') + 1);
}

}  // namespace

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run("--help") == 0);
    CHECK(run("") == 2);
    CHECK(run("synth --case gaussian --bogus --out " + dir.string()) == 2);
    CHECK(run("synth --case square --out " + dir.string()) == 2);
    CHECK(run("synth --case gaussian --size 2by2 --out " + dir.string()) == 2);
    CHECK(run("roundtrip --in /nonexistent.f2d --angles 4 --out " + dir.string() + " --report " + (dir / "r.csv").string()) == 1);
}

TEST_CASE("roundtrip report matches the library") {
    const fs::path dir = scratch("roundtrip");
    REQUIRE(run("synth --case gaussian --size 96x96 --out " + (dir / "g").string()) == 0);
    CHECK(fs::exists(dir / "g" / "run.json"));
    REQUIRE(run("roundtrip --in " + (dir / "g" / "field_0000.f2d").string() + " --angles 24 --out " + (dir / "rt").string() +
                " --report " + (dir / "rt.csv").string()) == 0);
    const Field2D f = read_field(dir / "g" / "field_0000.f2d");
    RoundtripOptions o;
    o.rcdt.n_angles = 24;
    const double expected = roundtrip_report(f, uniform_reference(96, 96), o).report.mean;
    CHECK(last_field(read_text(dir / "rt.csv")) == format_double(expected));
    for (const char* name : {"input.pgm", "output.pgm", "difference.pgm", "run.json"}) CHECK(fs::exists(dir / "rt" / name));
    const auto record = nlohmann::json::parse(read_text(dir / "rt" / "run.json"));
    CHECK(record["command"] == "roundtrip");
    CHECK(record["config"]["angles"] == 24);
}

TEST_CASE("singvals on the travelling gaussian") {
    const fs::path dir = scratch("singvals");
    REQUIRE(run("synth --case travelling-gaussian --size 100x100 --steps 30 --seed 5 --out " + (dir / "tg").string()) == 0);
    REQUIRE(run("singvals --manifest " + (dir / "tg" / "manifest.csv").string() + " --spaces physical,fourier,rcdt --angles 50 --out " +
                (dir / "sv.csv").string()) == 0);
    std::istringstream in(read_text(dir / "sv.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "space,index,sigma,ratio");
    double physical5 = -1, fourier5 = -1, rcdt5 = -1;
    while (std::getline(in, line)) {
        const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
        if (line.substr(a + 1, b - a - 1) != "5") continue;
        const double ratio = std::stod(line.substr(c + 1));
        const std::string space = line.substr(0, a);
        (space == "physical" ? physical5 : space == "fourier" ? fourier5 : rcdt5) = ratio;
    }
    CHECK(physical5 > 0);
    CHECK(fourier5 > 0);
    CHECK(rcdt5 >= 0);
    CHECK(rcdt5 < physical5);
}

TEST_CASE("predict at a training parameter reproduces its projection") {
    const fs::path dir = scratch("predict");
    REQUIRE(run("synth --case wave-analog --size 30x60 --steps 6 --out " + (dir / "w").string()) == 0);
    REQUIRE(run("predict --train " + (dir / "w" / "manifest.csv").string() + " --space physical --modes 3 --at 2 --threshold 0.5 --out " +
                (dir / "p").string()) == 0);
    const SnapshotSet set = load_snapshots(dir / "w" / "manifest.csv", true);
    RomConfig rc;
    rc.modes = 3;
    const RomModel model = build(set, rc);
    CHECK(read_field(dir / "p" / "prediction.f2d") == reconstruct_training(model, set, 2));
    CHECK(fs::exists(dir / "p" / "thresholded.pgm"));
    CHECK(run("predict --train " + (dir / "w" / "manifest.csv").string() + " --space physical --modes 3 --at 2 --regressor spline --out " +
              (dir / "q").string()) == 2);
}

TEST_CASE("interp-pair and project") {
    const fs::path dir = scratch("pair");
    REQUIRE(run("synth --case twin-jets --size 64x64 --param 10 --out " + (dir / "a").string()) == 0);
    REQUIRE(run("synth --case twin-jets --size 64x64 --param 40 --out " + (dir / "b").string()) == 0);
    REQUIRE(run("interp-pair --a " + (dir / "a" / "field_0000.f2d").string() + " --b " + (dir / "b" / "field_0000.f2d").string() +
                " --w 0.5 --space rcdt --angles 32 --out " + (dir / "i").string()) == 0);
    CHECK(fs::exists(dir / "i" / "interpolated.f2d"));
    REQUIRE(run("project --manifest " + (dir / "a" / "manifest.csv").string() + " --space physical --modes 1 --out " + (dir / "p").string()) == 0);
    CHECK(last_field(read_text(dir / "p" / "errors.csv")) != "");
}
