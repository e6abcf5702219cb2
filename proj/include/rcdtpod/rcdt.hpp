#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcdtpod/cdt.hpp"
#include "rcdtpod/grid.hpp"
#include "rcdtpod/radon.hpp"

namespace rcdtpod {

/// Per-angle transport maps of a field's Radon projections, stored
/// angle-major (`maps[k * n_s + j]`), plus the total field mass.
struct RcdtImage {
    std::size_t n_s = 0;
    std::vector<double> angles;
    std::vector<double> maps;
    double mass = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Extent extent;

    std::size_t n_angles() const noexcept { return angles.size(); }
    std::span<const double> column(std::size_t k) const noexcept {
        return std::span<const double>(maps).subspan(k * n_s, n_s);
    }
};

struct SignedRcdtImage {
    RcdtImage positive_part;
    RcdtImage negative_part;
};

struct RcdtOptions {
    /// 0 selects default_angle_count(rows, cols).
    std::size_t n_angles = 0;
    CdtOptions cdt;
    BackProjectionOptions back_projection;
};

/// Uniform reference density over the projection-offset grid of a
/// rows x cols image (cells of width one pixel, centred on the offsets).
Density1D uniform_reference(std::size_t rows, std::size_t cols);

/// Radon projections followed by a CDT of every angle column against the
/// reference. The field must be nonnegative with positive mass.
RcdtImage rcdt_forward(const Field2D& field, const Density1D& reference, const RcdtOptions& options = {});

/// Inverse CDT per angle, de-normalisation by the stored mass and filtered
/// back-projection. A zero-mass image inverts to the zero field.
Field2D rcdt_inverse(const RcdtImage& img, const Density1D& reference, const RcdtOptions& options = {});

/// The RcdtImage of the zero field: identity maps, zero mass.
RcdtImage zero_rcdt_image(std::size_t rows, std::size_t cols, const Density1D& reference, std::size_t n_angles,
                          Extent extent = {});

/// Transforms max(f, 0) and max(-f, 0) separately.
SignedRcdtImage rcdt_forward_signed(const Field2D& field, const Density1D& reference, const RcdtOptions& options = {});

/// Positive reconstruction minus negative reconstruction.
Field2D rcdt_inverse_signed(const SignedRcdtImage& img, const Density1D& reference, const RcdtOptions& options = {});

struct RoundtripOptions {
    RcdtOptions rcdt;
    bool signed_variant = false;
    /// Cells within this many pixels of the border are excluded from the
    /// error (the reconstruction itself is not cropped).
    std::size_t crop_margin = 0;
};

struct RoundtripResult {
    Field2D input;
    Field2D reconstruction;
    Field2D difference;  // input - reconstruction
    ErrorReport report;  // one relative L2 entry
};

/// Forward then inverse transform and the relative L2 error against the input.
RoundtripResult roundtrip_report(const Field2D& field, const Density1D& reference, const RoundtripOptions& options = {});

/// Crops `margin` cells from every side.
Field2D crop(const Field2D& field, std::size_t margin);

}  // namespace rcdtpod
