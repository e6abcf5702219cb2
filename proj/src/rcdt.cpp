#include "rcdtpod/rcdt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

namespace {

std::size_t angle_count(const RcdtOptions& options, std::size_t rows, std::size_t cols) {
    return options.n_angles == 0 ? default_angle_count(rows, cols) : options.n_angles;
}

void check_reference(const Density1D& reference, std::size_t n_s) {
    reference.validate();
    if (reference.size() != n_s) {
        throw ValidationError("rcdt: reference has " + std::to_string(reference.size()) +
                              " samples, projections have " + std::to_string(n_s));
    }
}

Field2D with_extent(const Field2D& f, const Extent& extent) {
    return Field2D(f.rows(), f.cols(), std::vector<double>(f.values().begin(), f.values().end()), extent);
}

}  // namespace

Density1D uniform_reference(std::size_t rows, std::size_t cols) {
    const std::size_t n_s = projection_length(rows, cols);
    const double half = 0.5 * static_cast<double>(n_s);
    return uniform_density(n_s, -half, half);
}

RcdtImage rcdt_forward(const Field2D& field, const Density1D& reference, const RcdtOptions& options) {
    if (field.min() < 0.0) {
        throw ValidationError("rcdt_forward: field has negative values; use rcdt_forward_signed");
    }
    const double mass = field.sum();
    if (!(mass > 0.0)) throw ValidationError("rcdt_forward: field has zero mass");

    Sinogram sino = radon_forward(field, angle_count(options, field.rows(), field.cols()));
    check_reference(reference, sino.n_s);
    for (double& v : sino.values) v = std::max(v, 0.0);

    RcdtImage img;
    img.n_s = sino.n_s;
    img.angles = sino.angles;
    img.maps.resize(sino.values.size());
    img.mass = mass;
    img.rows = field.rows();
    img.cols = field.cols();
    img.extent = field.extent();

    Density1D projection{std::vector<double>(sino.n_s), reference.x1, reference.x2};
    for (std::size_t k = 0; k < sino.n_angles(); ++k) {
        auto col = sino.column(k);
        std::copy(col.begin(), col.end(), projection.samples.begin());
        const TransportMap1D map = cdt_forward(projection, reference, options.cdt);
        std::copy(map.values.begin(), map.values.end(), img.maps.begin() + static_cast<std::ptrdiff_t>(k * img.n_s));
    }
    return img;
}

Field2D rcdt_inverse(const RcdtImage& img, const Density1D& reference, const RcdtOptions& options) {
    if (img.maps.size() != img.n_s * img.n_angles() || img.n_angles() == 0) {
        throw ValidationError("rcdt_inverse: malformed image");
    }
    check_reference(reference, img.n_s);
    if (!(img.mass >= 0.0) || !std::isfinite(img.mass)) throw ValidationError("rcdt_inverse: invalid mass");
    if (img.mass == 0.0) return Field2D::filled(img.rows, img.cols, 0.0, img.extent);

    Sinogram sino;
    sino.n_s = img.n_s;
    sino.angles = img.angles;
    sino.values.resize(img.maps.size());
    TransportMap1D map;
    map.mass = 1.0;
    map.values.resize(img.n_s);
    for (std::size_t k = 0; k < img.n_angles(); ++k) {
        auto col = img.column(k);
        std::copy(col.begin(), col.end(), map.values.begin());
        if (!is_non_decreasing(map.values)) {
            throw ValidationError("rcdt_inverse: transport map for angle " + std::to_string(k) + " is not monotone");
        }
        const Density1D density = cdt_inverse(map, reference);
        // Unit-mass projection density (dx = 1 pixel) back to field units.
        for (std::size_t j = 0; j < img.n_s; ++j) {
            sino.values[k * img.n_s + j] = density.samples[j] * reference.dx() * img.mass;
        }
    }
    return with_extent(radon_inverse(sino, img.rows, img.cols, options.back_projection), img.extent);
}

RcdtImage zero_rcdt_image(std::size_t rows, std::size_t cols, const Density1D& reference, std::size_t n_angles,
                          Extent extent) {
    RcdtImage img;
    img.n_s = projection_length(rows, cols);
    check_reference(reference, img.n_s);
    img.angles = uniform_angles(n_angles);
    img.maps.resize(img.n_s * n_angles);
    for (std::size_t k = 0; k < n_angles; ++k) {
        for (std::size_t j = 0; j < img.n_s; ++j) img.maps[k * img.n_s + j] = reference.node(j);
    }
    img.mass = 0.0;
    img.rows = rows;
    img.cols = cols;
    img.extent = extent;
    return img;
}

SignedRcdtImage rcdt_forward_signed(const Field2D& field, const Density1D& reference, const RcdtOptions& options) {
    std::vector<double> pos(field.size());
    std::vector<double> neg(field.size());
    bool any_pos = false;
    bool any_neg = false;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double v = field.values()[i];
        pos[i] = v > 0.0 ? v : 0.0;
        neg[i] = v < 0.0 ? -v : 0.0;
        any_pos = any_pos || v > 0.0;
        any_neg = any_neg || v < 0.0;
    }
    const std::size_t n_angles = angle_count(options, field.rows(), field.cols());
    auto part = [&](std::vector<double>&& values, bool present) {
        if (!present) return zero_rcdt_image(field.rows(), field.cols(), reference, n_angles, field.extent());
        return rcdt_forward(Field2D(field.rows(), field.cols(), std::move(values), field.extent()), reference, options);
    };
    return SignedRcdtImage{part(std::move(pos), any_pos), part(std::move(neg), any_neg)};
}

Field2D rcdt_inverse_signed(const SignedRcdtImage& img, const Density1D& reference, const RcdtOptions& options) {
    const auto& p = img.positive_part;
    const auto& n = img.negative_part;
    if (p.rows != n.rows || p.cols != n.cols || p.angles != n.angles) {
        throw ValidationError("rcdt_inverse_signed: parts disagree in shape or angles");
    }
    const Field2D pos = rcdt_inverse(p, reference, options);
    if (n.mass == 0.0) return pos;
    return difference(pos, rcdt_inverse(n, reference, options));
}

Field2D crop(const Field2D& field, std::size_t margin) {
    if (2 * margin + 2 > field.rows() || 2 * margin + 2 > field.cols()) {
        throw ValidationError("crop: margin too large for field");
    }
    const std::size_t rows = field.rows() - 2 * margin;
    const std::size_t cols = field.cols() - 2 * margin;
    std::vector<double> out;
    out.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) out.push_back(field(r + margin, c + margin));
    }
    return Field2D(rows, cols, std::move(out), field.extent());
}

RoundtripResult roundtrip_report(const Field2D& field, const Density1D& reference, const RoundtripOptions& options) {
    Field2D recon = options.signed_variant
                        ? rcdt_inverse_signed(rcdt_forward_signed(field, reference, options.rcdt), reference, options.rcdt)
                        : rcdt_inverse(rcdt_forward(field, reference, options.rcdt), reference, options.rcdt);
    const double err = options.crop_margin == 0
                           ? relative_error(field, recon)
                           : relative_error(crop(field, options.crop_margin), crop(recon, options.crop_margin));
    Field2D diff = difference(field, recon);
    return RoundtripResult{field, std::move(recon), std::move(diff), ErrorReport::from_errors({err}, NormKind::L2)};
}

}  // namespace rcdtpod
