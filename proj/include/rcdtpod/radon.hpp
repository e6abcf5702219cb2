#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcdtpod/grid.hpp"

namespace rcdtpod {

/// Radon-space array. Column k holds the line integrals for angle
/// `angles[k]`, sampled at offsets s_j = (j - (n_s - 1) / 2) * s_spacing.
/// Storage is angle-major: `values[k * n_s + j]`.
struct Sinogram {
    std::size_t n_s = 0;
    std::vector<double> angles;
    std::vector<double> values;
    double s_spacing = 1.0;

    std::size_t n_angles() const noexcept { return angles.size(); }

    std::span<const double> column(std::size_t k) const noexcept {
        return std::span<const double>(values).subspan(k * n_s, n_s);
    }
    std::span<double> column(std::size_t k) noexcept { return std::span<double>(values).subspan(k * n_s, n_s); }

    /// Throws ValidationError unless the invariants hold.
    void validate() const;
};

/// Odd projection length covering the image diagonal.
std::size_t projection_length(std::size_t rows, std::size_t cols);

/// max(rows, cols).
std::size_t default_angle_count(std::size_t rows, std::size_t cols);

/// theta_k = k * pi / n_angles.
std::vector<double> uniform_angles(std::size_t n_angles);

/// Forward transform by rotating the image about its centre with bilinear
/// interpolation and summing along the rotated columns.
Sinogram radon_forward(const Field2D& field, std::size_t n_angles);

struct BackProjectionOptions {
    bool hann_window = false;
};

/// Filtered back-projection (ramp filter, optional Hann window).
Field2D radon_inverse(const Sinogram& sino, std::size_t rows, std::size_t cols,
                      const BackProjectionOptions& options = {});

}  // namespace rcdtpod
