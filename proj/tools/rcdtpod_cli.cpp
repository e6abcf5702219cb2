// Batch command line front end for the rcdtpod library.

#include <Eigen/Core>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcdtpod/bench.hpp"
#include "rcdtpod/error.hpp"
#include "rcdtpod/io.hpp"
#include "rcdtpod/rcdt.hpp"
#include "rcdtpod/rom.hpp"
#include "rcdtpod/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace rcdtpod;

namespace {

std::string eigen_version() {
    return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION);
}

void write_run_record(const fs::path& path, const std::string& command, std::uint64_t seed, json config, json outputs) {
    json record = {{"command", command},
                   {"version", RCDTPOD_VERSION},
                   {"eigen", eigen_version()},
                   {"seed", seed},
                   {"config", std::move(config)},
                   {"outputs", std::move(outputs)}};
    write_text_atomic(path, record.dump(2) + "\n");
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw ValidationError("--size must look like RxC, got '" + text + "'");
    try {
        std::size_t used_r = 0, used_c = 0;
        const std::string r = text.substr(0, x), c = text.substr(x + 1);
        const auto rows = std::stoul(r, &used_r);
        const auto cols = std::stoul(c, &used_c);
        if (used_r != r.size() || used_c != c.size()) throw std::invalid_argument("trailing");
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw ValidationError("--size must look like RxC, got '" + text + "'");
    }
}

std::vector<double> parse_params(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw ValidationError("cannot parse parameter '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError("--at needs at least one value");
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

SpaceOptions space_options(const std::string& name, std::size_t angles) {
    SpaceOptions s;
    s.kind = parse_space_kind(name);
    s.rcdt.n_angles = angles;
    return s;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string kind;
    std::string size = "250x250";
    bool invert = false;
    std::optional<double> smooth_sigma;
    std::uint64_t seed = 0;
    std::optional<double> param;
    std::size_t steps = 0;
    std::string out;
};

void run_synth(const SynthArgs& a) {
    const auto [rows, cols] = parse_size(a.size);
    CaseSpec spec;
    spec.kind = parse_case_kind(a.kind);
    spec.rows = rows;
    spec.cols = cols;
    spec.inverted = a.invert;
    spec.smooth_sigma = a.smooth_sigma;
    spec.seed = a.seed;
    if (a.param) {
        spec.separation = *a.param;
        spec.dipole_param = *a.param;
    }
    if (a.steps > 0) spec.n_steps = a.steps;
    spec.validate();

    const fs::path out(a.out);
    fs::create_directories(out);
    Manifest manifest;
    SnapshotSet set;
    switch (spec.kind) {
        case CaseKind::TravellingGaussian: {
            TravellingGaussianConfig c;
            c.rows = rows;
            c.cols = cols;
            c.n_steps = spec.n_steps;
            c.seed = a.seed;
            set = make_travelling_gaussian(c);
            manifest.param_names = {"step"};
            break;
        }
        case CaseKind::WaveAnalog: {
            WaveAnalogConfig c;
            c.rows = rows;
            c.cols = cols;
            c.n_steps = a.steps > 0 ? a.steps : c.n_steps;
            set = make_wave_analog(c);
            manifest.param_names = {"step"};
            break;
        }
        default: {
            set.snapshots.push_back(make_field(spec));
            set.params.push_back({spec.kind == CaseKind::TwinJets ? spec.separation : a.param.value_or(0.0)});
            manifest.param_names = {"param"};
            break;
        }
    }
    json outputs = json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "field_%04zu.f2d", i);
        write_field(set.snapshots[i], out / name);
        manifest.entries.push_back({i, set.params[i], name});
        outputs.push_back(name);
    }
    export_pgm(set.snapshots.front(), out / "preview.pgm");
    write_manifest(manifest, out / "manifest.csv");
    outputs.push_back("manifest.csv");
    outputs.push_back("preview.pgm");
    json config = {{"case", std::string(to_string(spec.kind))}, {"rows", rows},         {"cols", cols},
                   {"invert", a.invert},                        {"steps", spec.n_steps}, {"rng", "splitmix64"}};
    config["smooth_sigma"] = a.smooth_sigma ? json(*a.smooth_sigma) : json(nullptr);
    config["param"] = a.param ? json(*a.param) : json(nullptr);
    write_run_record(out / "run.json", "synth", a.seed, config, outputs);
}

// ---- roundtrip ------------------------------------------------------------

struct RoundtripArgs {
    std::string in;
    std::size_t angles = 0;
    bool signed_variant = false;
    double epsilon = CdtOptions{}.epsilon_rel;
    std::string out;
    std::string report;
};

void run_roundtrip(const RoundtripArgs& a) {
    const Field2D field = read_field(a.in);
    RoundtripOptions options;
    options.rcdt.n_angles = a.angles;
    options.rcdt.cdt.epsilon_rel = a.epsilon;
    options.signed_variant = a.signed_variant;
    const RoundtripResult r = roundtrip_report(field, uniform_reference(field.rows(), field.cols()), options);

    const fs::path out(a.out);
    fs::create_directories(out);
    write_field(r.reconstruction, out / "reconstruction.f2d");
    write_field(r.difference, out / "difference.f2d");
    const double lo = std::min(r.input.min(), r.reconstruction.min());
    const double hi = std::max(r.input.max(), r.reconstruction.max());
    export_pgm(r.input, out / "input.pgm", lo, hi);
    export_pgm(r.reconstruction, out / "output.pgm", lo, hi);
    export_pgm_signed(r.difference, out / "difference.pgm");
    write_text_atomic(a.report, error_csv(r.report, {}));
    std::cout << "relative L2 error " << format_double(r.report.mean) << "\n";
    json config = {{"in", a.in}, {"angles", a.angles}, {"signed", a.signed_variant}, {"epsilon", a.epsilon}};
    write_run_record(out / "run.json", "roundtrip", 0, config,
                     {"reconstruction.f2d", "difference.f2d", "input.pgm", "output.pgm", "difference.pgm", a.report});
}

// ---- project / singvals ---------------------------------------------------

struct ProjectArgs {
    std::string manifest;
    std::string space;
    std::size_t modes = 5;
    std::size_t angles = 0;
    bool center = false;
    std::string out;
};

void run_project(const ProjectArgs& a) {
    const SnapshotSet set = load_snapshots(a.manifest, false);
    const auto entry = projection_study(set, space_options(a.space, a.angles), {a.modes}, a.center).front();
    const fs::path out(a.out);
    fs::create_directories(out);
    write_text_atomic(out / "errors.csv", error_csv(entry.report, set.params));
    std::cout << "mean relative L2 error " << format_double(entry.report.mean) << ", aggregate "
              << format_double(entry.aggregate) << "\n";
    json config = {{"manifest", a.manifest}, {"space", a.space}, {"modes", a.modes},
                   {"angles", a.angles},     {"center", a.center}};
    json outputs = {"errors.csv"};
    write_run_record(out / "run.json", "project", 0, config, outputs);
}

struct SingvalsArgs {
    std::string manifest;
    std::string spaces = "physical,fourier,rcdt";
    std::size_t angles = 0;
    std::string out;
};

void run_singvals(const SingvalsArgs& a) {
    const SnapshotSet set = load_snapshots(a.manifest, false);
    std::vector<SingularValueSeries> series;
    for (const auto& name : split_list(a.spaces)) {
        for (auto& s : space_singular_values(set, space_options(name, a.angles))) series.push_back(std::move(s));
    }
    if (series.empty()) throw ValidationError("--spaces is empty");
    write_text_atomic(a.out, singular_value_csv(singular_value_report(series)));
    fs::path record = fs::path(a.out);
    record.replace_extension(".run.json");
    json config = {{"manifest", a.manifest}, {"spaces", a.spaces}, {"angles", a.angles}};
    json outputs = {a.out};
    write_run_record(record, "singvals", 0, config, outputs);
}

// ---- predict / interp-pair ------------------------------------------------

struct PredictArgs {
    std::string train;
    std::string space;
    std::size_t modes = 5;
    std::string regressor = "linear";
    std::string at;
    std::optional<double> threshold;
    std::size_t angles = 0;
    std::string mass_mode = "regress";
    std::string out;
};

void run_predict(const PredictArgs& a) {
    const SnapshotSet set = load_snapshots(a.train, true);
    RomConfig rc;
    rc.space = space_options(a.space, a.angles);
    rc.modes = a.modes;
    rc.regressor = parse_regressor_kind(a.regressor);
    if (a.mass_mode == "regress") {
        rc.mass_mode = MassMode::Regress;
    } else if (a.mass_mode == "training-mean") {
        rc.mass_mode = MassMode::TrainingMean;
    } else {
        throw ValidationError("--mass-mode must be regress or training-mean");
    }
    const std::vector<double> param = parse_params(a.at);
    const Prediction p = predict(build(set, rc), param);
    if (p.extrapolated) std::cerr << "warning: parameter lies outside the training range\n";

    const fs::path out(a.out);
    fs::create_directories(out);
    json outputs = {"prediction.f2d", "prediction.pgm"};
    write_field(p.field, out / "prediction.f2d");
    export_pgm(p.field, out / "prediction.pgm");
    if (a.threshold) {
        const Field2D th = threshold(p.field, *a.threshold);
        write_field(th, out / "thresholded.f2d");
        export_pgm(th, out / "thresholded.pgm", 0.0, 1.0);
        outputs.push_back("thresholded.f2d");
        outputs.push_back("thresholded.pgm");
    }
    json config = {{"train", a.train},
                   {"space", a.space},
                   {"modes", a.modes},
                   {"regressor", a.regressor},
                   {"at", param},
                   {"angles", a.angles},
                   {"mass_mode", a.mass_mode},
                   {"extrapolated", p.extrapolated},
                   {"repaired_columns", p.repair.repaired_columns},
                   {"repair_magnitude", p.repair.magnitude}};
    config["threshold"] = a.threshold ? json(*a.threshold) : json(nullptr);
    write_run_record(out / "run.json", "predict", 0, config, outputs);
}

struct InterpArgs {
    std::string a;
    std::string b;
    double w = 0.5;
    std::string space;
    std::size_t angles = 0;
    std::string out;
};

void run_interp(const InterpArgs& a) {
    const Field2D fa = read_field(a.a);
    const Field2D fb = read_field(a.b);
    const Field2D f = interpolate_pair(fa, fb, a.w, space_options(a.space, a.angles));
    const fs::path out(a.out);
    fs::create_directories(out);
    write_field(f, out / "interpolated.f2d");
    export_pgm(f, out / "interpolated.pgm");
    json config = {{"a", a.a}, {"b", a.b}, {"w", a.w}, {"space", a.space}, {"angles", a.angles}};
    write_run_record(out / "run.json", "interp-pair", 0, config, {"interpolated.f2d", "interpolated.pgm"});
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    std::string study;
    std::uint64_t seed = 0;
    std::string out;
};

void run_bench(const BenchArgs& a) {
    StudySpec spec;
    spec.kind = parse_study_kind(a.study);
    spec.seed = a.seed;
    const fs::path out(a.out);
    const StudySummary summary = run_study(spec, out);
    for (const auto& [name, value] : summary.metrics) std::cout << name << " " << format_double(value) << "\n";
    for (const auto& [name, seconds] : summary.timings) std::cerr << "time " << name << " " << seconds << " s\n";
    json outputs = json::array();
    for (const auto& entry : fs::directory_iterator(out)) {
        if (entry.path().filename() != "run.json") outputs.push_back(entry.path().filename().string());
    }
    std::sort(outputs.begin(), outputs.end());
    write_run_record(out / "run.json", "bench", a.seed, {{"study", std::string(to_string(spec.kind))}}, outputs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RCDT transform and RCDT-POD reduced-order modelling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(RCDTPOD_VERSION));

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate synthetic fields and a manifest");
    s->add_option("--case", synth.kind, "circle|circle-edge|gaussian|twin-jets|travelling-gaussian|wave-analog|signed-dipole")
        ->required();
    s->add_option("--size", synth.size, "RxC");
    s->add_flag("--invert", synth.invert);
    s->add_option("--smooth-sigma", synth.smooth_sigma);
    s->add_option("--seed", synth.seed);
    s->add_option("--param", synth.param, "Jet separation or dipole parameter");
    s->add_option("--steps", synth.steps, "Snapshot count for families");
    s->add_option("--out", synth.out)->required();

    RoundtripArgs rt;
    auto* r = app.add_subcommand("roundtrip", "Forward and inverse RCDT of one field");
    r->add_option("--in", rt.in)->required();
    r->add_option("--angles", rt.angles, "0 picks max(rows, cols)")->required();
    r->add_flag("--signed", rt.signed_variant);
    r->add_option("--epsilon", rt.epsilon);
    r->add_option("--out", rt.out)->required();
    r->add_option("--report", rt.report)->required();

    ProjectArgs pj;
    auto* p = app.add_subcommand("project", "POD projection errors of a snapshot set");
    p->add_option("--manifest", pj.manifest)->required();
    p->add_option("--space", pj.space)->required();
    p->add_option("--modes", pj.modes)->required();
    p->add_option("--angles", pj.angles);
    p->add_flag("--center", pj.center);
    p->add_option("--out", pj.out)->required();

    SingvalsArgs sv;
    auto* v = app.add_subcommand("singvals", "Singular values per space");
    v->add_option("--manifest", sv.manifest)->required();
    v->add_option("--spaces", sv.spaces);
    v->add_option("--angles", sv.angles);
    v->add_option("--out", sv.out)->required();

    PredictArgs pr;
    auto* d = app.add_subcommand("predict", "Build a reduced model and predict at a parameter");
    d->add_option("--train", pr.train)->required();
    d->add_option("--space", pr.space)->required();
    d->add_option("--modes", pr.modes)->required();
    d->add_option("--regressor", pr.regressor);
    d->add_option("--at", pr.at, "Comma-separated parameter vector")->required();
    d->add_option("--threshold", pr.threshold);
    d->add_option("--angles", pr.angles);
    d->add_option("--mass-mode", pr.mass_mode, "regress|training-mean");
    d->add_option("--out", pr.out)->required();

    InterpArgs ip;
    auto* i = app.add_subcommand("interp-pair", "Interpolate two fields in a space");
    i->add_option("--a", ip.a)->required();
    i->add_option("--b", ip.b)->required();
    i->add_option("--w", ip.w)->required();
    i->add_option("--space", ip.space)->required();
    i->add_option("--angles", ip.angles);
    i->add_option("--out", ip.out)->required();

    BenchArgs bn;
    auto* b = app.add_subcommand("bench", "Run a named study");
    b->add_option("--study", bn.study, "table1|travelling-gaussian|twin-jets|wave-analog|signed-dipole")->required();
    b->add_option("--seed", bn.seed);
    b->add_option("--out", bn.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*s) run_synth(synth);
        if (*r) run_roundtrip(rt);
        if (*p) run_project(pj);
        if (*v) run_singvals(sv);
        if (*d) run_predict(pr);
        if (*i) run_interp(ip);
        if (*b) run_bench(bn);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
