#include "rcdtpod/radon.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

void Sinogram::validate() const {
    if (n_s == 0 || angles.empty()) throw ValidationError("sinogram: empty");
    if (values.size() != n_s * angles.size()) throw ValidationError("sinogram: value count mismatch");
    for (std::size_t k = 0; k < angles.size(); ++k) {
        if (!(angles[k] >= 0.0 && angles[k] < std::numbers::pi)) {
            throw ValidationError("sinogram: angle " + std::to_string(k) + " outside [0, pi)");
        }
        if (k > 0 && !(angles[k] > angles[k - 1])) throw ValidationError("sinogram: angles not strictly increasing");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("sinogram: non-finite value");
    }
    if (!(s_spacing > 0.0)) throw ValidationError("sinogram: s_spacing must be positive");
}

std::size_t projection_length(std::size_t rows, std::size_t cols) {
    const double diag = std::sqrt(static_cast<double>(rows * rows + cols * cols));
    auto n = static_cast<std::size_t>(std::ceil(diag));
    if (n % 2 == 0) ++n;
    return n;
}

std::size_t default_angle_count(std::size_t rows, std::size_t cols) { return std::max(rows, cols); }

std::vector<double> uniform_angles(std::size_t n_angles) {
    if (n_angles == 0) throw ValidationError("radon: need at least one angle");
    std::vector<double> angles(n_angles);
    for (std::size_t k = 0; k < n_angles; ++k) {
        angles[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_angles);
    }
    return angles;
}

namespace {

// Bilinear sample with zero extension outside the pixel lattice.
double sample_bilinear(const Field2D& f, double x, double y) {
    const auto cols = static_cast<double>(f.cols());
    const auto rows = static_cast<double>(f.rows());
    if (x <= -1.0 || y <= -1.0 || x >= cols || y >= rows) return 0.0;
    const double xf = std::floor(x);
    const double yf = std::floor(y);
    const double ax = x - xf;
    const double ay = y - yf;
    const auto c0 = static_cast<std::ptrdiff_t>(xf);
    const auto r0 = static_cast<std::ptrdiff_t>(yf);
    const auto nc = static_cast<std::ptrdiff_t>(f.cols());
    const auto nr = static_cast<std::ptrdiff_t>(f.rows());
    auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
        if (r < 0 || c < 0 || r >= nr || c >= nc) return 0.0;
        return f(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };
    return (1.0 - ay) * ((1.0 - ax) * at(r0, c0) + ax * at(r0, c0 + 1)) +
           ay * ((1.0 - ax) * at(r0 + 1, c0) + ax * at(r0 + 1, c0 + 1));
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Frequency response of the band-limited ramp built from its spatial
// kernel (h[0] = 1/4, h[odd n] = -1/(pi n)^2), doubled to pair with the
// pi / (2 * n_angles) back-projection weight.
std::vector<double> ramp_response(std::size_t padded, bool hann) {
    std::vector<double> h(padded, 0.0);
    h[0] = 0.25;
    for (std::size_t i = 1; i < padded; ++i) {
        const auto n = static_cast<std::ptrdiff_t>(i <= padded / 2 ? i : padded - i);
        if (n % 2 == 1) {
            const double pn = std::numbers::pi * static_cast<double>(n);
            h[i] = -1.0 / (pn * pn);
        }
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, h);
    std::vector<double> response(padded);
    for (std::size_t i = 0; i < padded; ++i) {
        response[i] = 2.0 * spectrum[i].real();
        if (hann) {
            const double f = static_cast<double>(i <= padded / 2 ? i : padded - i) / static_cast<double>(padded);
            response[i] *= 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * f));
        }
    }
    return response;
}

}  // namespace

Sinogram radon_forward(const Field2D& field, std::size_t n_angles) {
    if (n_angles == 0) throw ValidationError("radon_forward: n_angles must be >= 1");
    Sinogram sino;
    sino.n_s = projection_length(field.rows(), field.cols());
    sino.angles = uniform_angles(n_angles);
    sino.values.assign(sino.n_s * n_angles, 0.0);

    const double cx = 0.5 * static_cast<double>(field.cols() - 1);
    const double cy = 0.5 * static_cast<double>(field.rows() - 1);
    const double half = 0.5 * static_cast<double>(sino.n_s - 1);

    for (std::size_t k = 0; k < n_angles; ++k) {
        const double c = std::cos(sino.angles[k]);
        const double s = std::sin(sino.angles[k]);
        auto col = sino.column(k);
        for (std::size_t j = 0; j < sino.n_s; ++j) {
            const double offset = static_cast<double>(j) - half;
            double acc = 0.0;
            for (std::size_t i = 0; i < sino.n_s; ++i) {
                const double t = static_cast<double>(i) - half;
                acc += sample_bilinear(field, cx + offset * c - t * s, cy + offset * s + t * c);
            }
            col[j] = acc;
        }
    }
    return sino;
}

Field2D radon_inverse(const Sinogram& sino, std::size_t rows, std::size_t cols, const BackProjectionOptions& options) {
    sino.validate();
    if (rows < 2 || cols < 2) throw ValidationError("radon_inverse: target shape must be at least 2x2");
    if (projection_length(rows, cols) > sino.n_s) {
        throw ValidationError("radon_inverse: sinogram with n_s=" + std::to_string(sino.n_s) +
                              " cannot cover a " + std::to_string(rows) + "x" + std::to_string(cols) + " image");
    }
    const std::size_t padded = next_pow2(std::max<std::size_t>(64, 2 * sino.n_s));
    const auto response = ramp_response(padded, options.hann_window);

    Eigen::FFT<double> fft;
    std::vector<double> filtered(sino.values.size());
    std::vector<double> buffer(padded);
    std::vector<std::complex<double>> spectrum;
    std::vector<double> back;
    for (std::size_t k = 0; k < sino.n_angles(); ++k) {
        auto col = sino.column(k);
        std::fill(buffer.begin(), buffer.end(), 0.0);
        std::copy(col.begin(), col.end(), buffer.begin());
        fft.fwd(spectrum, buffer);
        for (std::size_t i = 0; i < padded; ++i) spectrum[i] *= response[i];
        fft.inv(back, spectrum);
        std::copy_n(back.begin(), sino.n_s, filtered.begin() + static_cast<std::ptrdiff_t>(k * sino.n_s));
    }

    const double cx = 0.5 * static_cast<double>(cols - 1);
    const double cy = 0.5 * static_cast<double>(rows - 1);
    const double half = 0.5 * static_cast<double>(sino.n_s - 1);
    const double scale = std::numbers::pi / (2.0 * static_cast<double>(sino.n_angles()));
    const auto last = static_cast<double>(sino.n_s - 1);

    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t k = 0; k < sino.n_angles(); ++k) {
        const double c = std::cos(sino.angles[k]) / sino.s_spacing;
        const double s = std::sin(sino.angles[k]) / sino.s_spacing;
        const double* q = filtered.data() + k * sino.n_s;
        for (std::size_t r = 0; r < rows; ++r) {
            const double y = static_cast<double>(r) - cy;
            for (std::size_t cc = 0; cc < cols; ++cc) {
                const double pos = (static_cast<double>(cc) - cx) * c + y * s + half;
                if (pos < 0.0 || pos > last) continue;
                const auto j = std::min(static_cast<std::size_t>(pos), sino.n_s - 2);
                const double a = pos - static_cast<double>(j);
                out[r * cols + cc] += (1.0 - a) * q[j] + a * q[j + 1];
            }
        }
    }
    for (double& v : out) v *= scale;
    return Field2D(rows, cols, std::move(out));
}

}  // namespace rcdtpod
