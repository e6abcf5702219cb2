#include "rcdtpod/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

Field2D::Field2D(std::size_t rows, std::size_t cols, std::vector<double> values, Extent extent)
    : rows_(rows), cols_(cols), values_(std::move(values)), extent_(extent) {
    if (rows_ < 2 || cols_ < 2) {
        throw ValidationError("Field2D: rows and cols must both be >= 2, got " + std::to_string(rows_) +
                              "x" + std::to_string(cols_));
    }
    if (values_.size() != rows_ * cols_) {
        throw ValidationError("Field2D: expected " + std::to_string(rows_ * cols_) + " values, got " +
                              std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("Field2D: non-finite value");
    }
}

Field2D Field2D::filled(std::size_t rows, std::size_t cols, double value, Extent extent) {
    return Field2D(rows, cols, std::vector<double>(rows * cols, value), extent);
}

double Field2D::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double Field2D::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field2D::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

void SnapshotSet::validate(bool require_distinct_params) const {
    if (snapshots.empty()) throw ValidationError("snapshot set is empty");
    if (params.size() != snapshots.size()) {
        throw ValidationError("snapshot set: " + std::to_string(snapshots.size()) + " snapshots but " +
                              std::to_string(params.size()) + " parameter vectors");
    }
    const Field2D& first = snapshots.front();
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        if (!snapshots[i].same_shape(first) || !(snapshots[i].extent() == first.extent())) {
            throw ValidationError("snapshot set: snapshot " + std::to_string(i) + " differs in shape or extent");
        }
    }
    for (const auto& p : params) {
        if (p.size() != params.front().size()) throw ValidationError("snapshot set: ragged parameter vectors");
    }
    if (require_distinct_params) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            for (std::size_t j = i + 1; j < params.size(); ++j) {
                if (params[i] == params[j]) {
                    throw ValidationError("snapshot set: duplicate parameters at snapshots " + std::to_string(i) +
                                          " and " + std::to_string(j));
                }
            }
        }
    }
}

std::string_view to_string(NormKind kind) { return kind == NormKind::L1 ? "L1" : "L2"; }

ErrorReport ErrorReport::from_errors(std::vector<double> errors, NormKind kind) {
    ErrorReport report;
    report.norm_kind = kind;
    report.mean = errors.empty() ? 0.0
                                 : std::accumulate(errors.begin(), errors.end(), 0.0) /
                                       static_cast<double>(errors.size());
    report.per_snapshot = std::move(errors);
    return report;
}

double relative_error(const Field2D& truth, const Field2D& approx, NormKind kind) {
    if (!truth.same_shape(approx)) throw ValidationError("relative_error: shape mismatch");
    auto t = truth.values();
    auto a = approx.values();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - a[i];
        if (kind == NormKind::L2) {
            num += d * d;
            den += t[i] * t[i];
        } else {
            num += std::abs(d);
            den += std::abs(t[i]);
        }
    }
    if (den == 0.0) throw ValidationError("relative_error: truth has zero norm, relative error undefined");
    return kind == NormKind::L2 ? std::sqrt(num) / std::sqrt(den) : num / den;
}

Field2D threshold(const Field2D& field, double level) {
    std::vector<double> out(field.size());
    auto v = field.values();
    std::transform(v.begin(), v.end(), out.begin(), [level](double x) { return x > level ? 1.0 : 0.0; });
    return Field2D(field.rows(), field.cols(), std::move(out), field.extent());
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const auto half = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
    double total = 0.0;
    for (std::ptrdiff_t i = -half; i <= half; ++i) {
        const double w = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + half)] = w;
        total += w;
    }
    for (double& w : k) w /= total;
    return k;
}

// Half-sample symmetric reflection: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
std::size_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
    const std::ptrdiff_t period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    if (i >= n) i = period - 1 - i;
    return static_cast<std::size_t>(i);
}

}  // namespace

std::size_t count_components(const Field2D& field, double level) {
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    std::vector<char> seen(field.size(), 0);
    std::vector<std::size_t> stack;
    std::size_t count = 0;
    for (std::size_t start = 0; start < field.size(); ++start) {
        if (seen[start] || !(field.values()[start] > level)) continue;
        ++count;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const std::size_t r = i / cols;
            const std::size_t c = i % cols;
            auto visit = [&](std::size_t j) {
                if (!seen[j] && field.values()[j] > level) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            };
            if (r > 0) visit(i - cols);
            if (r + 1 < rows) visit(i + cols);
            if (c > 0) visit(i - 1);
            if (c + 1 < cols) visit(i + 1);
        }
    }
    return count;
}

Field2D smooth_gaussian(const Field2D& field, double sigma_px) {
    if (!(sigma_px > 0.0) || !std::isfinite(sigma_px)) {
        throw ValidationError("smooth_gaussian: sigma must be positive");
    }
    const auto kernel = gaussian_kernel(sigma_px);
    const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const auto rows = static_cast<std::ptrdiff_t>(field.rows());
    const auto cols = static_cast<std::ptrdiff_t>(field.cols());
    auto in = field.values();

    std::vector<double> tmp(field.size(), 0.0);
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t k = -half; k <= half; ++k) {
                acc += kernel[static_cast<std::size_t>(k + half)] *
                       in[static_cast<std::size_t>(r * cols) + reflect(c + k, cols)];
            }
            tmp[static_cast<std::size_t>(r * cols + c)] = acc;
        }
    }
    std::vector<double> out(field.size(), 0.0);
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t k = -half; k <= half; ++k) {
                acc += kernel[static_cast<std::size_t>(k + half)] *
                       tmp[reflect(r + k, rows) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)];
            }
            out[static_cast<std::size_t>(r * cols + c)] = acc;
        }
    }
    return Field2D(field.rows(), field.cols(), std::move(out), field.extent());
}

Field2D invert_image(const Field2D& field) {
    std::vector<double> out(field.size());
    auto v = field.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0 || v[i] > 1.0) throw ValidationError("invert_image: values must lie in [0, 1]");
        out[i] = 1.0 - v[i];
    }
    return Field2D(field.rows(), field.cols(), std::move(out), field.extent());
}

Field2D difference(const Field2D& a, const Field2D& b) {
    if (!a.same_shape(b)) throw ValidationError("difference: shape mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] - b.values()[i];
    return Field2D(a.rows(), a.cols(), std::move(out), a.extent());
}

Field2D scaled(const Field2D& field, double c) {
    std::vector<double> out(field.values().begin(), field.values().end());
    for (double& x : out) x *= c;
    return Field2D(field.rows(), field.cols(), std::move(out), field.extent());
}

}  // namespace rcdtpod
