#pragma once

#include <cstddef>
#include <vector>

namespace rcdtpod {

/// Nonnegative samples on a uniform cell-centred grid over [x1, x2]:
/// sample i sits at x1 + (i + 1/2) * dx with dx = (x2 - x1) / n.
struct Density1D {
    std::vector<double> samples;
    double x1 = 0.0;
    double x2 = 1.0;

    std::size_t size() const noexcept { return samples.size(); }
    double dx() const noexcept { return (x2 - x1) / static_cast<double>(samples.size()); }
    double node(std::size_t i) const noexcept { return x1 + (static_cast<double>(i) + 0.5) * dx(); }
    double edge(std::size_t i) const noexcept { return x1 + static_cast<double>(i) * dx(); }

    /// Sum of samples times dx.
    double mass() const noexcept;

    /// Copy rescaled to unit mass. Throws ValidationError on zero mass.
    Density1D normalized() const;

    /// Throws ValidationError on empty/negative/non-finite samples or an
    /// empty domain.
    void validate() const;
};

/// Uniform density on [x1, x2] with n cells.
Density1D uniform_density(std::size_t n, double x1, double x2);

/// Transport map sampled at the reference nodes, plus the raw mass of the
/// signal it was computed from.
struct TransportMap1D {
    std::vector<double> values;
    double mass = 1.0;
};

struct CdtOptions {
    /// Regularisation added to every bin before normalising, relative to the
    /// largest sample. The absolute floor 1e-300 is always added. Zero
    /// disables the relative part.
    double epsilon_rel = 1e-8;
};

/// Map f_hat with int_{x1}^{f_hat(x)} f = int_{x1}^{x} r at every reference
/// node. Signal and reference must share the domain.
TransportMap1D cdt_forward(const Density1D& signal, const Density1D& reference, const CdtOptions& options = {});

/// Density r(f_hat^{-1}(x)) d/dx f_hat^{-1}(x) on the reference grid,
/// rescaled by map.mass. Accepts non-decreasing maps (ties become point
/// masses); any decrease is an error. Values outside the domain are clamped.
Density1D cdt_inverse(const TransportMap1D& map, const Density1D& reference);

/// True when values never decrease.
bool is_non_decreasing(const std::vector<double>& values) noexcept;

/// Least-squares non-decreasing fit (pool adjacent violators, unit weights).
std::vector<double> isotonic_fit(const std::vector<double>& values);

}  // namespace rcdtpod
