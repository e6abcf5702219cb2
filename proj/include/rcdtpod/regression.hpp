#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace rcdtpod {

enum class RegressorKind { Linear, Rbf, Gpr };

std::string_view to_string(RegressorKind kind);
RegressorKind parse_regressor_kind(std::string_view name);

/// Interpolating regression from parameter vectors to rows of a value
/// matrix (one output column per POD coefficient or mass).
///
/// Linear: piecewise-linear in a scalar parameter, end segments continued
/// outside the training range. Rbf: thin-plate spline plus a degree-1
/// polynomial, exact at the nodes. Gpr: zero-mean Gaussian process with a
/// squared-exponential kernel, length scale = median pairwise distance,
/// noise 1e-10.
class Regressor {
public:
    Regressor() = default;

    /// params.size() == values.rows() >= 2; params distinct and of equal
    /// length. Linear requires scalar params.
    static Regressor fit(RegressorKind kind, const std::vector<std::vector<double>>& params,
                         const Eigen::MatrixXd& values);

    Eigen::RowVectorXd predict(const std::vector<double>& param) const;

    /// True when param leaves the bounding box of the training params.
    bool extrapolates(const std::vector<double>& param) const;

    RegressorKind kind() const noexcept { return kind_; }
    double length_scale() const noexcept { return length_scale_; }

private:
    RegressorKind kind_ = RegressorKind::Linear;
    Eigen::MatrixXd nodes_;    // n x d training params
    Eigen::MatrixXd values_;   // Linear: values sorted by node
    Eigen::MatrixXd weights_;  // Rbf: (n + d + 1) x m; Gpr: n x m
    double length_scale_ = 0.0;

    Eigen::VectorXd as_vector(const std::vector<double>& param) const;
};

}  // namespace rcdtpod
