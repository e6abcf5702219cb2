#include "rcdtpod/bench.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "json.hpp"
#include "rcdtpod/error.hpp"
#include "rcdtpod/io.hpp"

namespace rcdtpod {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::Table1Suite: return "table1";
        case StudyKind::TravellingGaussianStudy: return "travelling-gaussian";
        case StudyKind::TwinJetInterp: return "twin-jets";
        case StudyKind::WaveAnalogTimeInterp: return "wave-analog";
        case StudyKind::SignedDipoleParamInterp: return "signed-dipole";
    }
    return "unknown";
}

StudyKind parse_study_kind(std::string_view name) {
    static const std::pair<std::string_view, StudyKind> aliases[] = {
        {"Table1Suite", StudyKind::Table1Suite},
        {"TravellingGaussianStudy", StudyKind::TravellingGaussianStudy},
        {"TwinJetInterp", StudyKind::TwinJetInterp},
        {"WaveAnalogTimeInterp", StudyKind::WaveAnalogTimeInterp},
        {"SignedDipoleParamInterp", StudyKind::SignedDipoleParamInterp},
    };
    for (const auto& [alias, kind] : aliases) {
        if (name == alias || name == to_string(kind)) return kind;
    }
    throw ValidationError("unknown study '" + std::string(name) + "'");
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<Table1Case> table1_cases() {
    return {
        {"circle", CaseKind::Circle, false, false, 2.279e-1},
        {"circle-inverse", CaseKind::Circle, true, false, 1.658e-1},
        {"circle-smoothed", CaseKind::Circle, false, true, 1.322e-1},
        {"circle-smoothed-inverse", CaseKind::Circle, true, true, 1.618e-1},
        {"circle-edge", CaseKind::CircleEdge, false, false, 6.065e-1},
        {"circle-edge-inverse", CaseKind::CircleEdge, true, false, 1.708e-1},
        {"circle-edge-smoothed", CaseKind::CircleEdge, false, true, 2.356e-1},
        {"circle-edge-smoothed-inverse", CaseKind::CircleEdge, true, true, 1.624e-1},
        {"gaussian", CaseKind::Gaussian, false, false, 3.204e-2},
        {"gaussian-inverse", CaseKind::Gaussian, true, false, 1.628e-1},
    };
}

const Table1Row& Table1Result::row(std::string_view name) const {
    for (const auto& r : rows) {
        if (r.spec.name == name) return r;
    }
    throw ValidationError("table1: no case named '" + std::string(name) + "'");
}

Table1Result run_table1(const Table1Config& config) {
    Table1Result out;
    out.config = config;
    const Density1D reference = uniform_reference(config.size, config.size);
    RoundtripOptions options;
    options.rcdt.n_angles = config.n_angles;
    for (const auto& c : table1_cases()) {
        CaseSpec spec;
        spec.kind = c.kind;
        spec.rows = spec.cols = config.size;
        spec.inverted = c.inverted;
        spec.radius = config.radius;
        spec.edge_width = config.edge_width;
        spec.sigma = config.sigma;
        if (c.smoothed) spec.smooth_sigma = config.smooth_sigma;
        const auto t0 = std::chrono::steady_clock::now();
        RoundtripResult result = roundtrip_report(make_field(spec), reference, options);
        out.rows.push_back({c, std::move(result), seconds_since(t0)});
    }
    return out;
}

double TravellingGaussianResult::ratio(std::string_view space, std::size_t index) const {
    for (const auto& s : singular_values) {
        if (s.space == space) {
            if (index < 1 || index > s.values.size()) throw ValidationError("ratio: index out of range");
            return s.values[index - 1] / s.values.front();
        }
    }
    throw ValidationError("ratio: no series named '" + std::string(space) + "'");
}

TravellingGaussianResult run_travelling_gaussian(const TravellingGaussianStudyConfig& config) {
    TravellingGaussianResult out{config, make_travelling_gaussian(config.data), {}, {}, {},
                                 Field2D::filled(2, 2, 0.0), Field2D::filled(2, 2, 0.0)};
    if (config.example_snapshot >= out.snapshots.size()) throw ValidationError("travelling gaussian: example index out of range");
    SpaceOptions physical;
    SpaceOptions fourier;
    fourier.kind = SpaceKind::Fourier;
    SpaceOptions rcdt;
    rcdt.kind = SpaceKind::Rcdt;
    rcdt.rcdt.n_angles = config.n_angles;
    for (const auto* space : {&physical, &fourier, &rcdt}) {
        auto series = space_singular_values(out.snapshots, *space);
        out.singular_values.push_back(std::move(series.front()));
    }
    out.physical = projection_study(out.snapshots, physical, {config.modes}).front();
    out.rcdt = projection_study(out.snapshots, rcdt, {config.modes}).front();

    // Example reconstructions through the same truncated bases.
    RomConfig rc;
    rc.modes = config.modes;
    rc.regressor = RegressorKind::Linear;
    rc.space = physical;
    out.example_physical = reconstruct_training(build(out.snapshots, rc), out.snapshots, config.example_snapshot);
    rc.space = rcdt;
    out.example_rcdt = reconstruct_training(build(out.snapshots, rc), out.snapshots, config.example_snapshot);
    return out;
}

TwinJetResult run_twin_jets(const TwinJetStudyConfig& config) {
    if (!(config.weight >= 0.0 && config.weight <= 1.0)) throw ValidationError("twin jets: weight must lie in [0, 1]");
    TwinJetConfig jets = config.jets;
    jets.separation = config.small_separation;
    Field2D small = make_twin_jets(jets);
    jets.separation = config.large_separation;
    Field2D large = make_twin_jets(jets);
    jets.separation = (1.0 - config.weight) * config.small_separation + config.weight * config.large_separation;
    Field2D target = make_twin_jets(jets);

    SpaceOptions physical;
    SpaceOptions rcdt;
    rcdt.kind = SpaceKind::Rcdt;
    rcdt.rcdt.n_angles = config.n_angles;
    Field2D phys = interpolate_pair(small, large, config.weight, physical);
    Field2D rc = interpolate_pair(small, large, config.weight, rcdt);

    auto components = [&](const Field2D& f) { return count_components(f, config.level * f.max()); };
    TwinJetResult out{config, small, large, target, phys, rc, components(phys), components(rc), components(target),
                      relative_error(target, phys), relative_error(target, rc)};
    return out;
}

const WaveSpaceResult& WaveStudyResult::space(SpaceKind kind) const {
    for (const auto& s : spaces) {
        if (s.space == kind) return s;
    }
    throw ValidationError("wave study: space '" + std::string(to_string(kind)) + "' was not run");
}

WaveStudyResult run_wave_analog(const WaveStudyConfig& config) {
    auto step_of = [](std::size_t ordinal) {
        if (ordinal == 0) throw ValidationError("wave study: snapshot ordinals are 1-based");
        return static_cast<double>(ordinal - 1);
    };
    SnapshotSet training;
    for (std::size_t ordinal : config.training_snapshots) {
        training.snapshots.push_back(make_wave_snapshot(config.wave, step_of(ordinal)));
        training.params.push_back({step_of(ordinal)});
    }
    const double target_step = step_of(config.target_snapshot);
    WaveStudyResult out{config, make_wave_snapshot(config.wave, target_step), {}};
    for (SpaceKind kind : {SpaceKind::Physical, SpaceKind::Fourier, SpaceKind::Rcdt}) {
        RomConfig rc;
        rc.space.kind = kind;
        rc.space.rcdt.n_angles = config.n_angles;
        rc.modes = config.modes;
        rc.regressor = config.regressor;
        Prediction p = predict(build(training, rc), {target_step});
        Field2D th = threshold(p.field, config.threshold);
        const double err = relative_error(out.truth, th, NormKind::L1);
        out.spaces.push_back({kind, std::move(p.field), std::move(th), err, p.repair});
    }
    return out;
}

DipoleStudyResult run_signed_dipole(const DipoleStudyConfig& config) {
    SnapshotSet training;
    for (double p : {config.param_lo, config.param_hi}) {
        training.snapshots.push_back(make_signed_dipole(p, config.dipole));
        training.params.push_back({p});
    }
    const std::size_t modes = std::min(config.modes, training.size());
    RomConfig rc;
    rc.modes = modes;
    rc.regressor = config.regressor;
    rc.space.kind = SpaceKind::RcdtSigned;
    rc.space.rcdt.n_angles = config.n_angles;
    Prediction signed_pred = predict(build(training, rc), {config.target});
    rc.space.kind = SpaceKind::Physical;
    Prediction phys_pred = predict(build(training, rc), {config.target});
    Field2D truth = make_signed_dipole(config.target, config.dipole);
    const double e_signed = relative_error(truth, signed_pred.field);
    const double e_phys = relative_error(truth, phys_pred.field);
    return DipoleStudyResult{config, modes, std::move(truth), std::move(signed_pred.field), std::move(phys_pred.field),
                             e_signed, e_phys, signed_pred.repair};
}

namespace {

void write_triplet(const fs::path& dir, const std::string& stem, const Field2D& input, const Field2D& output) {
    const double lo = std::min(input.min(), output.min());
    const double hi = std::max(input.max(), output.max());
    export_pgm(input, dir / (stem + "_input.pgm"), lo, hi);
    export_pgm(output, dir / (stem + "_output.pgm"), lo, hi);
    export_pgm_signed(difference(input, output), dir / (stem + "_difference.pgm"));
}

json table1_json(const Table1Config& c) {
    return {{"size", c.size}, {"n_angles", c.n_angles}, {"radius", c.radius}, {"edge_width", c.edge_width},
            {"sigma", c.sigma}, {"smooth_sigma", c.smooth_sigma}};
}

json travelling_json(const TravellingGaussianStudyConfig& c) {
    return {{"rows", c.data.rows},       {"cols", c.data.cols},         {"n_steps", c.data.n_steps},
            {"sigma", c.data.sigma},     {"mean_lo", c.data.mean_lo},   {"mean_hi", c.data.mean_hi},
            {"seed", c.data.seed},       {"rng", "splitmix64"},         {"modes", c.modes},
            {"n_angles", c.n_angles},    {"example_snapshot", c.example_snapshot}};
}

json jets_json(const TwinJetStudyConfig& c) {
    return {{"rows", c.jets.rows},
            {"cols", c.jets.cols},
            {"decay", c.jets.decay},
            {"spread", c.jets.spread},
            {"width", c.jets.width},
            {"attraction", c.jets.attraction},
            {"critical_separation", c.jets.critical_separation},
            {"small_separation", c.small_separation},
            {"large_separation", c.large_separation},
            {"weight", c.weight},
            {"level", c.level},
            {"n_angles", c.n_angles}};
}

json wave_json(const WaveStudyConfig& c) {
    return {{"rows", c.wave.rows},
            {"cols", c.wave.cols},
            {"speed", c.wave.speed},
            {"training_snapshots", c.training_snapshots},
            {"target_snapshot", c.target_snapshot},
            {"modes", c.modes},
            {"regressor", std::string(to_string(c.regressor))},
            {"threshold", c.threshold},
            {"n_angles", c.n_angles}};
}

json dipole_json(const DipoleStudyConfig& c) {
    return {{"rows", c.dipole.rows},         {"cols", c.dipole.cols},      {"lobe_sigma", c.dipole.lobe_sigma},
            {"param_lo", c.param_lo},        {"param_hi", c.param_hi},     {"target", c.target},
            {"modes", c.modes},              {"regressor", std::string(to_string(c.regressor))},
            {"n_angles", c.n_angles}};
}

}  // namespace

StudySummary run_study(const StudySpec& spec, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    StudySummary summary;
    summary.kind = spec.kind;
    json config = {{"study", std::string(to_string(spec.kind))}, {"seed", spec.seed}, {"version", RCDTPOD_VERSION}};
    const auto t0 = std::chrono::steady_clock::now();

    switch (spec.kind) {
        case StudyKind::Table1Suite: {
            config["config"] = table1_json(spec.table1);
            const Table1Result res = run_table1(spec.table1);
            std::string csv = "case,inverted,smoothed,error,published_error,ratio\n";
            for (const auto& row : res.rows) {
                const double ratio = row.error() / row.spec.published_error;
                csv += row.spec.name + "," + (row.spec.inverted ? "1" : "0") + "," + (row.spec.smoothed ? "1" : "0") + "," +
                       format_double(row.error()) + "," + format_double(row.spec.published_error) + "," +
                       format_double(ratio) + "\n";
                summary.metrics.emplace_back(row.spec.name, row.error());
                summary.timings.emplace_back(row.spec.name, row.seconds);
                write_triplet(out_dir, row.spec.name, row.result.input, row.result.reconstruction);
            }
            write_text_atomic(out_dir / "table1.csv", csv);
            break;
        }
        case StudyKind::TravellingGaussianStudy: {
            TravellingGaussianStudyConfig c = spec.travelling;
            c.data.seed = spec.seed;
            config["config"] = travelling_json(c);
            const TravellingGaussianResult res = run_travelling_gaussian(c);
            write_text_atomic(out_dir / "singular_values.csv", singular_value_csv(singular_value_report(res.singular_values)));
            write_text_atomic(out_dir / "errors_physical.csv", error_csv(res.physical.report, res.snapshots.params));
            write_text_atomic(out_dir / "errors_rcdt.csv", error_csv(res.rcdt.report, res.snapshots.params));
            std::string csv = "space,r,mean_error,aggregate_error\n";
            csv += "physical," + std::to_string(c.modes) + "," + format_double(res.physical.report.mean) + "," +
                   format_double(res.physical.aggregate) + "\n";
            csv += "rcdt," + std::to_string(c.modes) + "," + format_double(res.rcdt.report.mean) + "," +
                   format_double(res.rcdt.aggregate) + "\n";
            write_text_atomic(out_dir / "projection_errors.csv", csv);
            const Field2D& example = res.snapshots.snapshots[c.example_snapshot];
            write_triplet(out_dir, "physical_r" + std::to_string(c.modes), example, res.example_physical);
            write_triplet(out_dir, "rcdt_r" + std::to_string(c.modes), example, res.example_rcdt);
            summary.metrics = {{"physical_sigma5_ratio", res.ratio("physical", 5)},
                               {"fourier_sigma5_ratio", res.ratio("fourier", 5)},
                               {"rcdt_sigma5_ratio", res.ratio("rcdt", 5)},
                               {"physical_mean_error", res.physical.report.mean},
                               {"rcdt_mean_error", res.rcdt.report.mean}};
            break;
        }
        case StudyKind::TwinJetInterp: {
            config["config"] = jets_json(spec.twin_jets);
            const TwinJetResult res = run_twin_jets(spec.twin_jets);
            std::string csv = "field,max,components,error\n";
            csv += "target," + format_double(res.target.max()) + "," + std::to_string(res.target_components) + ",0\n";
            csv += "physical," + format_double(res.physical.max()) + "," + std::to_string(res.physical_components) + "," +
                   format_double(res.physical_error) + "\n";
            csv += "rcdt," + format_double(res.rcdt.max()) + "," + std::to_string(res.rcdt_components) + "," +
                   format_double(res.rcdt_error) + "\n";
            write_text_atomic(out_dir / "twin_jets.csv", csv);
            export_pgm(res.small, out_dir / "small.pgm");
            export_pgm(res.large, out_dir / "large.pgm");
            write_triplet(out_dir, "physical", res.target, res.physical);
            write_triplet(out_dir, "rcdt", res.target, res.rcdt);
            summary.metrics = {{"physical_components", static_cast<double>(res.physical_components)},
                               {"rcdt_components", static_cast<double>(res.rcdt_components)},
                               {"physical_error", res.physical_error},
                               {"rcdt_error", res.rcdt_error}};
            break;
        }
        case StudyKind::WaveAnalogTimeInterp: {
            config["config"] = wave_json(spec.wave);
            const WaveStudyResult res = run_wave_analog(spec.wave);
            std::string csv = "space,l1_error,repaired_columns,repair_magnitude\n";
            for (const auto& s : res.spaces) {
                const std::string name(to_string(s.space));
                csv += name + "," + format_double(s.l1_error) + "," + std::to_string(s.repair.repaired_columns) + "," +
                       format_double(s.repair.magnitude) + "\n";
                write_triplet(out_dir, name, res.truth, s.thresholded);
                summary.metrics.emplace_back(name + "_l1_error", s.l1_error);
            }
            write_text_atomic(out_dir / "wave_errors.csv", csv);
            break;
        }
        case StudyKind::SignedDipoleParamInterp: {
            config["config"] = dipole_json(spec.dipole);
            const DipoleStudyResult res = run_signed_dipole(spec.dipole);
            config["modes_used"] = res.modes_used;
            std::string csv = "space,modes,error\n";
            csv += "rcdt-signed," + std::to_string(res.modes_used) + "," + format_double(res.signed_rcdt_error) + "\n";
            csv += "physical," + std::to_string(res.modes_used) + "," + format_double(res.physical_error) + "\n";
            write_text_atomic(out_dir / "dipole.csv", csv);
            write_triplet(out_dir, "rcdt_signed", res.truth, res.signed_rcdt);
            write_triplet(out_dir, "physical", res.truth, res.physical);
            summary.metrics = {{"signed_rcdt_error", res.signed_rcdt_error}, {"physical_error", res.physical_error}};
            break;
        }
    }
    write_text_atomic(out_dir / "config.json", config.dump(2) + "\n");
    summary.timings.emplace_back("total", seconds_since(t0));
    return summary;
}

}  // namespace rcdtpod
