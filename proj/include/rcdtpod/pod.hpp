#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rcdtpod/grid.hpp"

namespace rcdtpod {

/// N x n matrix of flattened snapshots, one per column.
struct SnapshotMatrix {
    Eigen::MatrixXd data;
    bool centered = false;
    Eigen::VectorXd mean_vector;  // zeros unless centered
};

/// Columns are the row-major flattenings of the snapshots. With `center`
/// the column-wise mean is subtracted and stored.
SnapshotMatrix assemble(const SnapshotSet& snapshots, bool center = false);

/// Same for columns that are already vectors (transform-space data).
SnapshotMatrix assemble_columns(Eigen::MatrixXd columns, bool center = false);

/// All min(N, n) singular triplets of a snapshot matrix. Singular values
/// below 1e-12 * sigma_1 are stored as exact zeros.
struct Decomposition {
    Eigen::MatrixXd modes;
    Eigen::VectorXd singular_values;
    Eigen::VectorXd mean_vector;
};

Decomposition decompose(const SnapshotMatrix& mat);

struct PodBasis {
    Eigen::MatrixXd modes;             // N x r, orthonormal columns
    Eigen::VectorXd singular_values;   // r values, non-increasing
    Eigen::VectorXd mean_vector;

    std::size_t r() const noexcept { return static_cast<std::size_t>(modes.cols()); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(modes.rows()); }
};

/// Leading r triplets; requires 1 <= r <= min(N, n).
PodBasis truncate(const Decomposition& dec, std::size_t r);

/// decompose followed by truncate.
PodBasis compute_basis(const SnapshotMatrix& mat, std::size_t r);

/// Fraction of squared singular values captured by the first r.
double energy_ratio(std::span<const double> singular_values, std::size_t r);

/// modes^T (x - mean).
Eigen::VectorXd project(const PodBasis& basis, const Eigen::VectorXd& x);

/// mean + modes * coeffs.
Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coeffs);

struct SingularValueRow {
    std::string space;
    std::size_t index = 0;  // 1-based
    double sigma = 0.0;
    double ratio = 0.0;
};

struct SingularValueSeries {
    std::string space;
    std::vector<double> values;
};

/// Rows of sigma_i / sigma_1 per series, in input order.
std::vector<SingularValueRow> singular_value_report(const std::vector<SingularValueSeries>& series);

}  // namespace rcdtpod
