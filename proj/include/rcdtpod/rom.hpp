#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rcdtpod/grid.hpp"
#include "rcdtpod/pod.hpp"
#include "rcdtpod/rcdt.hpp"
#include "rcdtpod/regression.hpp"

namespace rcdtpod {

enum class SpaceKind { Physical, Fourier, Rcdt, RcdtSigned };

std::string_view to_string(SpaceKind kind);
/// "physical", "fourier", "rcdt", "rcdt-signed".
SpaceKind parse_space_kind(std::string_view name);

/// Space plus transform options. The RCDT reference is the uniform
/// density over the projection-offset grid of the snapshot shape.
struct SpaceOptions {
    SpaceKind kind = SpaceKind::Physical;
    RcdtOptions rcdt;

    bool uses_rcdt() const noexcept { return kind == SpaceKind::Rcdt || kind == SpaceKind::RcdtSigned; }
};

/// A field in a space: one vector per part (two for RcdtSigned) and the
/// matching masses (RCDT spaces only).
struct Representation {
    std::vector<Eigen::VectorXd> parts;
    std::vector<double> masses;
};

/// Shape and transform metadata needed to go back to physical space.
struct SpaceGeometry {
    SpaceOptions options;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Extent extent;
    std::vector<double> angles;  // RCDT spaces
    std::size_t n_s = 0;         // RCDT spaces
    Density1D reference;         // RCDT spaces
};

SpaceGeometry make_geometry(const SpaceOptions& options, std::size_t rows, std::size_t cols, Extent extent = {});

/// Physical: the flattened field. Fourier: orthonormal 2-D DFT, half
/// spectrum along columns, real parts then imaginary parts. Rcdt: the
/// flattened maps. RcdtSigned: positive-part and negative-part maps.
Representation encode(const Field2D& field, const SpaceGeometry& geometry);

/// Monotonicity repair applied to RCDT map columns before inversion.
struct RepairStats {
    std::size_t repaired_columns = 0;
    double magnitude = 0.0;  // largest absolute change to a map value
};

/// Inverse of encode. RCDT map columns are projected onto non-decreasing
/// sequences and clamped to the reference domain first; negative masses
/// are clamped to zero.
Field2D decode(const Representation& rep, const SpaceGeometry& geometry, RepairStats* repair = nullptr);

enum class MassMode { Regress, TrainingMean };

std::string_view to_string(MassMode mode);

struct RomConfig {
    SpaceOptions space;
    std::size_t modes = 5;
    RegressorKind regressor = RegressorKind::Linear;
    MassMode mass_mode = MassMode::Regress;
    bool center = false;
};

struct RomModel {
    RomConfig config;
    SpaceGeometry geometry;
    std::vector<PodBasis> bases;             // one per representation part
    Regressor coefficients;                  // columns: coefficients of all parts, in part order
    std::optional<Regressor> masses;         // RCDT spaces with MassMode::Regress
    std::vector<std::vector<double>> training_params;
    std::vector<std::vector<double>> training_masses;  // per snapshot, per part
};

/// Encode, POD-truncate to config.modes, fit the coefficient (and mass)
/// regressors. Requires >= 2 snapshots with distinct params.
RomModel build(const SnapshotSet& training, const RomConfig& config);

struct Prediction {
    Field2D field;
    bool extrapolated = false;
    RepairStats repair;
};

Prediction predict(const RomModel& model, const std::vector<double>& param);

/// Projection of training snapshot i onto the model's bases, decoded with
/// its own mass: what predict returns at that node for an exact
/// interpolant.
Field2D reconstruct_training(const RomModel& model, const SnapshotSet& training, std::size_t i);

struct ProjectionStudyEntry {
    std::size_t r = 0;
    ErrorReport report;    // per-snapshot relative L2 error in physical space
    double aggregate = 0;  // sqrt(sum ||x - x_r||^2) / ||X||_F
    RepairStats repair;
};

/// Project-then-reconstruct every snapshot with r modes for each requested
/// r (no regression), decode with the true masses and score.
std::vector<ProjectionStudyEntry> projection_study(const SnapshotSet& snapshots, const SpaceOptions& space,
                                                   const std::vector<std::size_t>& r_values, bool center = false);

/// Singular values of the snapshot matrix in a space, one series per
/// representation part named after the space ("rcdt-signed+" and
/// "rcdt-signed-" for the signed variant).
std::vector<SingularValueSeries> space_singular_values(const SnapshotSet& snapshots, const SpaceOptions& space);

/// (1 - w) * repr(a) + w * repr(b), decoded. Symmetric bitwise:
/// interpolate_pair(a, b, w) == interpolate_pair(b, a, 1 - w).
Field2D interpolate_pair(const Field2D& a, const Field2D& b, double weight, const SpaceOptions& space);

}  // namespace rcdtpod
