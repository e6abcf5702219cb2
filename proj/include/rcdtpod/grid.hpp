#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rcdtpod {

/// Physical bounds of a uniform grid. Carried as metadata only; all
/// transform math works in pixel coordinates.
struct Extent {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    bool operator==(const Extent&) const = default;
};

/// Uniform-grid 2-D scalar field, row-major with the top row first.
///
/// Invariants (checked on construction): rows, cols >= 2, exactly
/// rows * cols values, all finite.
class Field2D {
public:
    Field2D(std::size_t rows, std::size_t cols, std::vector<double> values, Extent extent = {});

    /// Field of the given shape filled with `value`.
    static Field2D filled(std::size_t rows, std::size_t cols, double value, Extent extent = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    const Extent& extent() const noexcept { return extent_; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    std::span<const double> values() const noexcept { return values_; }

    double sum() const noexcept;
    double min() const noexcept;
    double max() const noexcept;

    bool same_shape(const Field2D& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Field2D&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    Extent extent_;
};

/// Ordered snapshots with one parameter vector each.
struct SnapshotSet {
    std::vector<Field2D> snapshots;
    std::vector<std::vector<double>> params;

    std::size_t size() const noexcept { return snapshots.size(); }

    /// Checks shape/extent uniformity, params length and (optionally)
    /// pairwise-distinct params. Throws ValidationError.
    void validate(bool require_distinct_params) const;
};

enum class NormKind { L1, L2 };

std::string_view to_string(NormKind kind);

struct ErrorReport {
    std::vector<double> per_snapshot;
    double mean = 0.0;
    NormKind norm_kind = NormKind::L2;

    static ErrorReport from_errors(std::vector<double> errors, NormKind kind);
};

/// ||truth - approx|| / ||truth|| under the chosen norm over all cells.
double relative_error(const Field2D& truth, const Field2D& approx, NormKind kind = NormKind::L2);

/// 1 where value > level, else 0.
Field2D threshold(const Field2D& field, double level);

/// Number of 4-connected regions with value > level.
std::size_t count_components(const Field2D& field, double level);

/// Separable Gaussian blur, kernel truncated at 4 sigma and renormalised to
/// unit sum, reflective (half-sample symmetric) boundaries.
Field2D smooth_gaussian(const Field2D& field, double sigma_px);

/// 1 - value per cell; values must lie in [0, 1].
Field2D invert_image(const Field2D& field);

/// Element-wise a - b.
Field2D difference(const Field2D& a, const Field2D& b);

/// Element-wise c * f.
Field2D scaled(const Field2D& field, double c);

}  // namespace rcdtpod
