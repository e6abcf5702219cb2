#include "rcdtpod/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

std::string_view to_string(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::Linear: return "linear";
        case RegressorKind::Rbf: return "rbf";
        case RegressorKind::Gpr: return "gpr";
    }
    return "unknown";
}

RegressorKind parse_regressor_kind(std::string_view name) {
    for (auto kind : {RegressorKind::Linear, RegressorKind::Rbf, RegressorKind::Gpr}) {
        if (name == to_string(kind)) return kind;
    }
    throw ValidationError("unknown regressor '" + std::string(name) + "'");
}

namespace {

constexpr double kGprNoise = 1e-10;

double thin_plate(double r) { return r > 0.0 ? r * r * std::log(r) : 0.0; }

double squared_exponential(double r, double length) { return std::exp(-0.5 * (r * r) / (length * length)); }

}  // namespace

Eigen::VectorXd Regressor::as_vector(const std::vector<double>& param) const {
    if (static_cast<Eigen::Index>(param.size()) != nodes_.cols()) {
        throw ValidationError("regressor: parameter has " + std::to_string(param.size()) + " entries, expected " +
                              std::to_string(nodes_.cols()));
    }
    Eigen::VectorXd p(static_cast<Eigen::Index>(param.size()));
    for (std::size_t i = 0; i < param.size(); ++i) {
        if (!std::isfinite(param[i])) throw ValidationError("regressor: non-finite parameter");
        p(static_cast<Eigen::Index>(i)) = param[i];
    }
    return p;
}

Regressor Regressor::fit(RegressorKind kind, const std::vector<std::vector<double>>& params,
                         const Eigen::MatrixXd& values) {
    const auto n = static_cast<Eigen::Index>(params.size());
    if (n < 2) throw ValidationError("regressor: at least two training points are required");
    if (values.rows() != n) throw ValidationError("regressor: value rows do not match parameter count");
    if (!values.allFinite()) throw ValidationError("regressor: non-finite training value");
    const auto d = static_cast<Eigen::Index>(params.front().size());
    if (d == 0) throw ValidationError("regressor: empty parameter vector");

    Regressor reg;
    reg.kind_ = kind;
    reg.nodes_.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(params[static_cast<std::size_t>(i)].size()) != d) {
            throw ValidationError("regressor: parameter vectors differ in length");
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            const double v = params[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (!std::isfinite(v)) throw ValidationError("regressor: non-finite parameter");
            reg.nodes_(i, k) = v;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if ((reg.nodes_.row(i) - reg.nodes_.row(j)).norm() == 0.0) {
                throw ValidationError("regressor: duplicate training parameter at rows " + std::to_string(i) + " and " +
                                      std::to_string(j));
            }
        }
    }

    switch (kind) {
        case RegressorKind::Linear: {
            if (d != 1) throw ValidationError("regressor: linear interpolation needs scalar parameters");
            std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return reg.nodes_(a, 0) < reg.nodes_(b, 0); });
            Eigen::MatrixXd sorted_nodes(n, 1);
            reg.values_.resize(n, values.cols());
            for (Eigen::Index i = 0; i < n; ++i) {
                sorted_nodes(i, 0) = reg.nodes_(order[static_cast<std::size_t>(i)], 0);
                reg.values_.row(i) = values.row(order[static_cast<std::size_t>(i)]);
            }
            reg.nodes_ = std::move(sorted_nodes);
            break;
        }
        case RegressorKind::Rbf: {
            // [Phi P; P^T 0] [w; c] = [Y; 0] with P = [1, x].
            const Eigen::Index m = n + d + 1;
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) a(i, j) = thin_plate((reg.nodes_.row(i) - reg.nodes_.row(j)).norm());
                a(i, n) = 1.0;
                a(n, i) = 1.0;
                for (Eigen::Index k = 0; k < d; ++k) {
                    a(i, n + 1 + k) = reg.nodes_(i, k);
                    a(n + 1 + k, i) = reg.nodes_(i, k);
                }
            }
            Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, values.cols());
            rhs.topRows(n) = values;
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (!lu.isInvertible()) {
                throw ValidationError("regressor: thin-plate system is singular (collinear parameters?)");
            }
            reg.weights_ = lu.solve(rhs);
            break;
        }
        case RegressorKind::Gpr: {
            std::vector<double> dists;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = i + 1; j < n; ++j) dists.push_back((reg.nodes_.row(i) - reg.nodes_.row(j)).norm());
            }
            const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
            std::nth_element(dists.begin(), mid, dists.end());
            double median = *mid;
            if (dists.size() % 2 == 0) median = 0.5 * (median + *std::max_element(dists.begin(), mid));
            reg.length_scale_ = median;
            Eigen::MatrixXd k(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    k(i, j) = squared_exponential((reg.nodes_.row(i) - reg.nodes_.row(j)).norm(), median);
                }
                k(i, i) += kGprNoise;
            }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
            if (ldlt.info() != Eigen::Success) throw RuntimeError("regressor: GPR kernel factorisation failed");
            reg.weights_ = ldlt.solve(values);
            break;
        }
    }
    return reg;
}

Eigen::RowVectorXd Regressor::predict(const std::vector<double>& param) const {
    if (nodes_.rows() == 0) throw ValidationError("regressor: not fitted");
    const Eigen::VectorXd p = as_vector(param);
    const Eigen::Index n = nodes_.rows();
    switch (kind_) {
        case RegressorKind::Linear: {
            const double x = p(0);
            Eigen::Index seg = 0;
            while (seg + 2 < n && x > nodes_(seg + 1, 0)) ++seg;
            const double x0 = nodes_(seg, 0);
            const double x1 = nodes_(seg + 1, 0);
            if (x == x1) return values_.row(seg + 1);
            const double t = (x - x0) / (x1 - x0);
            return (1.0 - t) * values_.row(seg) + t * values_.row(seg + 1);
        }
        case RegressorKind::Rbf: {
            const Eigen::Index d = nodes_.cols();
            Eigen::RowVectorXd basis(n + d + 1);
            for (Eigen::Index i = 0; i < n; ++i) basis(i) = thin_plate((nodes_.row(i).transpose() - p).norm());
            basis(n) = 1.0;
            for (Eigen::Index k = 0; k < d; ++k) basis(n + 1 + k) = p(k);
            return basis * weights_;
        }
        case RegressorKind::Gpr: {
            Eigen::RowVectorXd kstar(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                kstar(i) = squared_exponential((nodes_.row(i).transpose() - p).norm(), length_scale_);
            }
            return kstar * weights_;
        }
    }
    throw RuntimeError("regressor: unknown kind");
}

bool Regressor::extrapolates(const std::vector<double>& param) const {
    const Eigen::VectorXd p = as_vector(param);
    for (Eigen::Index k = 0; k < nodes_.cols(); ++k) {
        if (p(k) < nodes_.col(k).minCoeff() || p(k) > nodes_.col(k).maxCoeff()) return true;
    }
    return false;
}

}  // namespace rcdtpod
