#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcdtpod/rcdt.hpp"
#include "rcdtpod/regression.hpp"
#include "rcdtpod/rom.hpp"
#include "rcdtpod/synth.hpp"

namespace rcdtpod {

enum class StudyKind { Table1Suite, TravellingGaussianStudy, TwinJetInterp, WaveAnalogTimeInterp, SignedDipoleParamInterp };

/// "table1", "travelling-gaussian", "twin-jets", "wave-analog", "signed-dipole".
std::string_view to_string(StudyKind kind);
/// Accepts the short names above and the enum spellings.
StudyKind parse_study_kind(std::string_view name);

// ---- Roundtrip suite ------------------------------------------------------

struct Table1Config {
    std::size_t size = 250;
    std::size_t n_angles = 24;
    double radius = 50.0;
    double edge_width = 3.0;
    double sigma = 20.0;
    double smooth_sigma = 2.0;
};

struct Table1Case {
    std::string name;
    CaseKind kind = CaseKind::Circle;
    bool inverted = false;
    bool smoothed = false;
    double published_error = 0.0;
};

/// The ten cases with their published errors.
std::vector<Table1Case> table1_cases();

struct Table1Row {
    Table1Case spec;
    RoundtripResult result;
    double seconds = 0.0;

    double error() const { return result.report.mean; }
};

struct Table1Result {
    Table1Config config;
    std::vector<Table1Row> rows;

    /// Throws ValidationError for an unknown case name.
    const Table1Row& row(std::string_view name) const;
};

Table1Result run_table1(const Table1Config& config = {});

// ---- Travelling Gaussian --------------------------------------------------

struct TravellingGaussianStudyConfig {
    TravellingGaussianConfig data;
    std::size_t modes = 5;
    std::size_t n_angles = 0;
    std::size_t example_snapshot = 0;
};

struct TravellingGaussianResult {
    TravellingGaussianStudyConfig config;
    SnapshotSet snapshots;
    std::vector<SingularValueSeries> singular_values;  // physical, fourier, rcdt
    ProjectionStudyEntry physical;
    ProjectionStudyEntry rcdt;
    Field2D example_physical;  // example snapshot, projected with r modes
    Field2D example_rcdt;

    /// sigma_index / sigma_1 (1-based index) of the named series.
    double ratio(std::string_view space, std::size_t index) const;
};

TravellingGaussianResult run_travelling_gaussian(const TravellingGaussianStudyConfig& config = {});

// ---- Twin jets ------------------------------------------------------------

struct TwinJetStudyConfig {
    TwinJetConfig jets;  // separation is overridden per configuration
    double small_separation = 16.0;
    double large_separation = 80.0;
    double weight = 0.5;
    /// Components are counted above level * (field maximum).
    double level = 0.5;
    std::size_t n_angles = 0;
};

struct TwinJetResult {
    TwinJetStudyConfig config;
    Field2D small;
    Field2D large;
    Field2D target;  // jets generated directly at the interpolated separation
    Field2D physical;
    Field2D rcdt;
    std::size_t physical_components = 0;
    std::size_t rcdt_components = 0;
    std::size_t target_components = 0;
    double physical_error = 0.0;  // relative L2 against target
    double rcdt_error = 0.0;
};

TwinJetResult run_twin_jets(const TwinJetStudyConfig& config = {});

// ---- Wave analog ----------------------------------------------------------

struct WaveStudyConfig {
    WaveAnalogConfig wave;
    /// 1-based snapshot ordinals; ordinal i is step i - 1.
    std::vector<std::size_t> training_snapshots{1, 50, 100, 150, 200};
    std::size_t target_snapshot = 75;
    std::size_t modes = 5;
    RegressorKind regressor = RegressorKind::Linear;
    double threshold = 0.5;
    std::size_t n_angles = 0;
};

struct WaveSpaceResult {
    SpaceKind space = SpaceKind::Physical;
    Field2D prediction;
    Field2D thresholded;
    double l1_error = 0.0;  // relative L1 of the thresholded prediction
    RepairStats repair;
};

struct WaveStudyResult {
    WaveStudyConfig config;
    Field2D truth;
    std::vector<WaveSpaceResult> spaces;  // physical, fourier, rcdt

    const WaveSpaceResult& space(SpaceKind kind) const;
};

WaveStudyResult run_wave_analog(const WaveStudyConfig& config = {});

// ---- Signed dipole --------------------------------------------------------

struct DipoleStudyConfig {
    DipoleConfig dipole;
    double param_lo = -1.0;
    double param_hi = 1.0;
    double target = 0.0;
    /// Requested modes; clamped to the training-set size.
    std::size_t modes = 10;
    RegressorKind regressor = RegressorKind::Linear;
    std::size_t n_angles = 0;
};

struct DipoleStudyResult {
    DipoleStudyConfig config;
    std::size_t modes_used = 0;
    Field2D truth;
    Field2D signed_rcdt;
    Field2D physical;
    double signed_rcdt_error = 0.0;  // relative L2
    double physical_error = 0.0;
    RepairStats repair;
};

DipoleStudyResult run_signed_dipole(const DipoleStudyConfig& config = {});

// ---- Reports --------------------------------------------------------------

struct StudySpec {
    StudyKind kind = StudyKind::Table1Suite;
    std::uint64_t seed = 0;
    Table1Config table1;
    TravellingGaussianStudyConfig travelling;
    TwinJetStudyConfig twin_jets;
    WaveStudyConfig wave;
    DipoleStudyConfig dipole;
};

/// Headline numbers of a finished study, in a fixed order.
struct StudySummary {
    StudyKind kind = StudyKind::Table1Suite;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::pair<std::string, double>> timings;  // seconds; logged only
};

/// Runs the study and writes config.json, CSV tables and PGM images into
/// `out_dir`. Every file is a pure function of `spec`.
StudySummary run_study(const StudySpec& spec, const std::filesystem::path& out_dir);

}  // namespace rcdtpod
