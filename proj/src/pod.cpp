#include "rcdtpod/pod.hpp"

#include <cmath>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

namespace {

constexpr double kZeroSigma = 1e-12;

void check_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw ValidationError("snapshot matrix: non-finite entry");
}

// Flip each column so that its largest-magnitude entry (first on ties) is
// positive. Makes the basis independent of the SVD backend's sign choice.
void fix_signs(Eigen::MatrixXd& modes) {
    for (Eigen::Index j = 0; j < modes.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < modes.rows(); ++i) {
            const double a = std::abs(modes(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (modes(arg, j) < 0.0) modes.col(j) *= -1.0;
    }
}

}  // namespace

SnapshotMatrix assemble_columns(Eigen::MatrixXd columns, bool center) {
    if (columns.rows() == 0 || columns.cols() == 0) throw ValidationError("snapshot matrix: empty");
    check_finite(columns);
    SnapshotMatrix mat;
    mat.centered = center;
    if (center) {
        mat.mean_vector = columns.rowwise().mean();
        columns.colwise() -= mat.mean_vector;
    } else {
        mat.mean_vector = Eigen::VectorXd::Zero(columns.rows());
    }
    mat.data = std::move(columns);
    return mat;
}

SnapshotMatrix assemble(const SnapshotSet& snapshots, bool center) {
    if (snapshots.size() == 0) throw ValidationError("assemble: empty snapshot set");
    const Field2D& first = snapshots.snapshots.front();
    Eigen::MatrixXd columns(static_cast<Eigen::Index>(first.size()), static_cast<Eigen::Index>(snapshots.size()));
    for (std::size_t j = 0; j < snapshots.size(); ++j) {
        const Field2D& f = snapshots.snapshots[j];
        if (!f.same_shape(first)) throw ValidationError("assemble: snapshot " + std::to_string(j) + " has a different shape");
        columns.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(f.values().data(), columns.rows());
    }
    return assemble_columns(std::move(columns), center);
}

Decomposition decompose(const SnapshotMatrix& mat) {
    const Eigen::MatrixXd& x = mat.data;
    if (x.size() == 0) throw ValidationError("decompose: empty matrix");
    check_finite(x);

    Decomposition dec;
    if (x.rows() >= x.cols()) {
        // Tall: X = Q R, then the small SVD of R.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
        const Eigen::MatrixXd r = qr.matrixQR().topRows(x.cols()).triangularView<Eigen::Upper>();
        Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU);
        if (svd.info() != Eigen::Success) throw RuntimeError("decompose: SVD did not converge");
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
        dec.modes = q * svd.matrixU();
        dec.singular_values = svd.singularValues();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
        if (svd.info() != Eigen::Success) throw RuntimeError("decompose: SVD did not converge");
        dec.modes = svd.matrixU();
        dec.singular_values = svd.singularValues();
    }
    fix_signs(dec.modes);
    const double s1 = dec.singular_values.size() > 0 ? dec.singular_values(0) : 0.0;
    for (auto& s : dec.singular_values) {
        if (s < kZeroSigma * s1) s = 0.0;
    }
    dec.mean_vector = mat.mean_vector;
    return dec;
}

PodBasis truncate(const Decomposition& dec, std::size_t r) {
    const auto available = static_cast<std::size_t>(dec.singular_values.size());
    if (r < 1 || r > available) {
        throw ValidationError("pod: r = " + std::to_string(r) + " outside [1, " + std::to_string(available) + "]");
    }
    const auto rr = static_cast<Eigen::Index>(r);
    return PodBasis{dec.modes.leftCols(rr), dec.singular_values.head(rr), dec.mean_vector};
}

PodBasis compute_basis(const SnapshotMatrix& mat, std::size_t r) {
    const auto limit = static_cast<std::size_t>(std::min(mat.data.rows(), mat.data.cols()));
    if (r < 1 || r > limit) {
        throw ValidationError("pod: r = " + std::to_string(r) + " outside [1, " + std::to_string(limit) + "]");
    }
    return truncate(decompose(mat), r);
}

double energy_ratio(std::span<const double> singular_values, std::size_t r) {
    if (r < 1 || r > singular_values.size()) throw ValidationError("energy_ratio: r out of range");
    double head = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < singular_values.size(); ++i) {
        const double s2 = singular_values[i] * singular_values[i];
        total += s2;
        if (i < r) head += s2;
    }
    if (!(total > 0.0)) throw ValidationError("energy_ratio: all singular values are zero");
    return head / total;
}

Eigen::VectorXd project(const PodBasis& basis, const Eigen::VectorXd& x) {
    if (x.size() != basis.modes.rows()) throw ValidationError("project: vector length does not match the basis");
    return basis.modes.transpose() * (x - basis.mean_vector);
}

Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != basis.modes.cols()) throw ValidationError("reconstruct: coefficient count does not match r");
    return basis.mean_vector + basis.modes * coeffs;
}

std::vector<SingularValueRow> singular_value_report(const std::vector<SingularValueSeries>& series) {
    std::vector<SingularValueRow> rows;
    for (const auto& s : series) {
        if (s.values.empty() || !(s.values.front() > 0.0)) {
            throw ValidationError("singular_value_report: leading singular value of '" + s.space + "' is zero");
        }
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            rows.push_back({s.space, i + 1, s.values[i], s.values[i] / s.values.front()});
        }
    }
    return rows;
}

}  // namespace rcdtpod
