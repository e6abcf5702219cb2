#include "rcdtpod/cdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

double Density1D::mass() const noexcept { return std::accumulate(samples.begin(), samples.end(), 0.0) * dx(); }

void Density1D::validate() const {
    if (samples.empty()) throw ValidationError("density: no samples");
    if (!(x2 > x1) || !std::isfinite(x1) || !std::isfinite(x2)) throw ValidationError("density: empty domain");
    for (double s : samples) {
        if (!std::isfinite(s)) throw ValidationError("density: non-finite sample");
        if (s < 0.0) throw ValidationError("density: negative sample");
    }
}

Density1D Density1D::normalized() const {
    validate();
    const double m = mass();
    if (!(m > 0.0)) throw ValidationError("density: zero mass cannot be normalised");
    Density1D out = *this;
    for (double& s : out.samples) s /= m;
    return out;
}

Density1D uniform_density(std::size_t n, double x1, double x2) {
    Density1D d{std::vector<double>(n, 1.0), x1, x2};
    d.validate();
    return d.normalized();
}

bool is_non_decreasing(const std::vector<double>& values) noexcept {
    return std::adjacent_find(values.begin(), values.end(), std::greater<>()) == values.end();
}

std::vector<double> isotonic_fit(const std::vector<double>& values) {
    // Blocks of pooled values: running mean and size.
    std::vector<double> means;
    std::vector<std::size_t> sizes;
    for (double v : values) {
        means.push_back(v);
        sizes.push_back(1);
        while (means.size() > 1 && means[means.size() - 2] > means.back()) {
            const std::size_t nb = sizes.back();
            const std::size_t na = sizes[sizes.size() - 2];
            const double merged = (means[means.size() - 2] * static_cast<double>(na) + means.back() * static_cast<double>(nb)) /
                                  static_cast<double>(na + nb);
            means.pop_back();
            sizes.pop_back();
            means.back() = merged;
            sizes.back() = na + nb;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t b = 0; b < means.size(); ++b) out.insert(out.end(), sizes[b], means[b]);
    return out;
}

namespace {

// Cumulative distribution at cell edges (n + 1 entries, 0 ... 1) of the
// regularised, normalised samples. Accumulated in extended precision so
// that cells carrying only the regularisation floor keep their resolution
// near C = 1.
std::vector<long double> edge_cdf(const std::vector<double>& samples, double epsilon_rel) {
    const double peak = *std::max_element(samples.begin(), samples.end());
    const long double eps = static_cast<long double>(epsilon_rel * peak) + 1e-300L;
    std::vector<long double> cdf(samples.size() + 1, 0.0L);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        cdf[i + 1] = cdf[i] + static_cast<long double>(samples[i]) + eps;
    }
    const long double total = cdf.back();
    if (!(total > 0.0L) || !std::isfinite(static_cast<double>(total))) {
        throw ValidationError("cdt: signal has zero mass");
    }
    for (auto& c : cdf) c /= total;
    cdf.back() = 1.0L;
    return cdf;
}

void check_domains(const Density1D& a, const Density1D& b) {
    const double tol = 1e-12 * std::max(1.0, std::abs(a.x2 - a.x1));
    if (std::abs(a.x1 - b.x1) > tol || std::abs(a.x2 - b.x2) > tol) {
        throw ValidationError("cdt: signal and reference domains differ");
    }
}

}  // namespace

TransportMap1D cdt_forward(const Density1D& signal, const Density1D& reference, const CdtOptions& options) {
    signal.validate();
    reference.validate();
    check_domains(signal, reference);
    if (options.epsilon_rel < 0.0) throw ValidationError("cdt: epsilon must be nonnegative");

    const double raw_mass = signal.mass();
    if (options.epsilon_rel == 0.0 && !(raw_mass > 0.0)) {
        throw ValidationError("cdt: zero-mass signal with regularisation disabled");
    }

    const auto sig_cdf = edge_cdf(signal.samples, options.epsilon_rel);
    const auto ref_cdf = edge_cdf(reference.samples, options.epsilon_rel);
    const double dx = signal.dx();

    TransportMap1D map;
    map.mass = raw_mass;
    map.values.resize(reference.size());
    for (std::size_t j = 0; j < reference.size(); ++j) {
        // Reference CDF at node j: midpoint of cell j.
        const long double q = 0.5L * (ref_cdf[j] + ref_cdf[j + 1]);
        // Leftmost cell k with sig_cdf[k + 1] >= q.
        const auto it = std::lower_bound(sig_cdf.begin() + 1, sig_cdf.end(), q);
        const auto k = static_cast<std::size_t>(std::distance(sig_cdf.begin() + 1, it));
        const std::size_t kk = std::min(k, signal.size() - 1);
        const long double width = sig_cdf[kk + 1] - sig_cdf[kk];
        long double frac = width > 0.0L ? (q - sig_cdf[kk]) / width : 0.0L;
        frac = std::clamp(frac, 0.0L, 1.0L);
        map.values[j] = signal.edge(kk) + static_cast<double>(frac) * dx;
    }
    return map;
}

Density1D cdt_inverse(const TransportMap1D& map, const Density1D& reference) {
    reference.validate();
    if (map.values.size() != reference.size()) {
        throw ValidationError("cdt_inverse: map has " + std::to_string(map.values.size()) +
                              " values but reference has " + std::to_string(reference.size()));
    }
    for (double v : map.values) {
        if (!std::isfinite(v)) throw ValidationError("cdt_inverse: non-finite map value");
    }
    if (!is_non_decreasing(map.values)) throw ValidationError("cdt_inverse: transport map is not monotone");

    const auto ref_cdf = edge_cdf(reference.samples, 0.0);
    const std::size_t n = reference.size();

    // Knots of g = f_hat^{-1}: (f_hat(x_j), x_j). The signal CDF is
    // R o g with R the exact reference CDF.
    std::vector<double> kx(n);
    std::vector<long double> kq(n);
    for (std::size_t j = 0; j < n; ++j) {
        kx[j] = std::clamp(map.values[j], reference.x1, reference.x2);
        kq[j] = reference.node(j);
    }
    const long double lo_end = reference.x1;
    const long double hi_end = reference.x2;

    std::vector<long double> secant(n > 1 ? n - 1 : 0, 0.0L);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double span = kx[i + 1] - kx[i];
        secant[i] = span > 0.0 ? (kq[i + 1] - kq[i]) / static_cast<long double>(span) : 0.0L;
    }

    // Slopes of g at the knots. Interior knots take the C2 cubic-spline
    // slope through the distinct knots, limited to keep g monotone.
    // Repeated abscissae are jumps and use a one-sided secant; maps with
    // fewer than three distinct knots use three-point estimates.
    std::vector<long double> tangent(n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        const bool has_left = i > 0 && kx[i] > kx[i - 1];
        const bool has_right = i + 1 < n && kx[i + 1] > kx[i];
        if (has_left && has_right) {
            const long double a = secant[i - 1];
            const long double b = secant[i];
            const long double ha = kx[i] - kx[i - 1];
            const long double hb = kx[i + 1] - kx[i];
            tangent[i] = std::clamp((hb * a + ha * b) / (ha + hb), 0.0L, 3.0L * std::min(a, b));
        } else if (has_left) {
            tangent[i] = secant[i - 1];
        } else if (has_right) {
            tangent[i] = secant[i];
        }
    }
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < n; ++i) {
        if (distinct.empty() || kx[i] > kx[distinct.back()]) distinct.push_back(i);
    }
    if (const std::size_t m = distinct.size(); m >= 3) {
        std::vector<long double> h(m - 1), del(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            h[i] = kx[distinct[i + 1]] - kx[distinct[i]];
            del[i] = (kq[distinct[i + 1]] - kq[distinct[i]]) / h[i];
        }
        // Tridiagonal system for the slopes, natural ends.
        std::vector<long double> lower(m, 0.0L), diag(m), upper(m, 0.0L), rhs(m);
        diag[0] = 2.0L;
        upper[0] = 1.0L;
        rhs[0] = 3.0L * del[0];
        lower[m - 1] = 1.0L;
        diag[m - 1] = 2.0L;
        rhs[m - 1] = 3.0L * del[m - 2];
        for (std::size_t i = 1; i + 1 < m; ++i) {
            lower[i] = h[i];
            diag[i] = 2.0L * (h[i - 1] + h[i]);
            upper[i] = h[i - 1];
            rhs[i] = 3.0L * (h[i] * del[i - 1] + h[i - 1] * del[i]);
        }
        for (std::size_t i = 1; i < m; ++i) {
            const long double w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        std::vector<long double> slope(m);
        slope[m - 1] = rhs[m - 1] / diag[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) slope[i] = (rhs[i] - upper[i] * slope[i + 1]) / diag[i];
        for (std::size_t i = 1; i + 1 < m; ++i) {
            tangent[distinct[i]] = std::clamp(slope[i], 0.0L, 3.0L * std::min(del[i - 1], del[i]));
        }
    }

    // End tangents: the density is extrapolated log-linearly from the two
    // outermost secants, which suits exponentially decaying flanks.
    auto end_density = [](long double d_near, long double d_far, long double gap_near, long double gap_far) {
        if (!(d_near > 0.0L) || !(d_far > d_near) || !(gap_near > 0.0L) || !(gap_far > 0.0L)) return d_near;
        const long double log_slope = std::log(d_far / d_near) / (0.5L * (gap_near + gap_far));
        return d_near * std::exp(-log_slope * 0.5L * gap_near);
    };
    if (n >= 3) {
        tangent.front() = end_density(secant[0], secant[1], kx[1] - kx[0], kx[2] - kx[1]);
        tangent.back() = end_density(secant[n - 2], secant[n - 3], kx[n - 1] - kx[n - 2], kx[n - 2] - kx[n - 3]);
    }

    // Tails beyond the outermost knots: exponential density carrying the
    // remaining reference mass, matched to the end tangent and truncated
    // at the domain boundary. Without a usable slope the mass is spread
    // uniformly.
    struct Tail {
        long double rate = 0.0L;  // per unit length, 0 = uniform
        long double mass = 0.0L;
        double anchor = 0.0;      // outermost knot
        double boundary = 0.0;    // domain end
    };
    auto make_tail = [](long double mass, long double slope, double anchor, double boundary) {
        Tail t{0.0L, mass, anchor, boundary};
        const long double length = std::abs(static_cast<long double>(anchor - boundary));
        if (mass > 0.0L && slope > 0.0L && length > 0.0L) {
            const long double rate = slope / mass;
            if (rate * length > 1.0L) t.rate = rate;
        }
        return t;
    };
    const Tail left = make_tail(kq.front() - lo_end, tangent.front(), kx.front(), reference.x1);
    const Tail right = make_tail(hi_end - kq.back(), tangent.back(), kx.back(), reference.x2);
    // Cumulative tail mass between x and the anchor.
    auto tail_mass = [](const Tail& t, double x) -> long double {
        const long double length = std::abs(static_cast<long double>(t.anchor - t.boundary));
        const long double dist = std::abs(static_cast<long double>(t.anchor - x));
        if (length == 0.0L) return t.mass;
        if (t.rate == 0.0L) return t.mass * dist / length;
        return t.mass * -std::expm1(-t.rate * dist) / -std::expm1(-t.rate * length);
    };

    auto cdf_at = [&](double x) -> long double {
        if (x <= kx.front()) return kq.front() - tail_mass(left, x);
        if (x >= kx.back()) return kq.back() + tail_mass(right, x);
        const auto it = std::upper_bound(kx.begin(), kx.end(), x);
        const auto m = static_cast<std::size_t>(std::distance(kx.begin(), it)) - 1;
        const long double h = static_cast<long double>(kx[m + 1] - kx[m]);
        const long double t = static_cast<long double>(x - kx[m]) / h;
        const long double t2 = t * t;
        const long double t3 = t2 * t;
        const long double value = (2.0L * t3 - 3.0L * t2 + 1.0L) * kq[m] + (t3 - 2.0L * t2 + t) * h * tangent[m] +
                                  (-2.0L * t3 + 3.0L * t2) * kq[m + 1] + (t3 - t2) * h * tangent[m + 1];
        return std::clamp(value, kq[m], kq[m + 1]);
    };

    const double dx = reference.dx();
    // F is linear inside a cell under the piecewise-constant model, so a
    // cell holding two or more distinct knots fixes g at both its edges.
    // Other edges use the smooth interpolant. Either way g(edge) stays
    // between the knots that bracket it.
    std::vector<long double> edge_g(n + 1);
    edge_g.front() = lo_end;
    edge_g.back() = hi_end;
    auto cell_line = [&](std::size_t cell, double x, long double& value) {
        const double lo = reference.edge(cell);
        const double hi = reference.edge(cell + 1);
        const auto a = static_cast<std::size_t>(std::distance(kx.begin(), std::lower_bound(kx.begin(), kx.end(), lo)));
        const auto b = static_cast<std::size_t>(std::distance(kx.begin(), std::lower_bound(kx.begin(), kx.end(), hi)));
        if (b < a + 2) return false;
        const std::size_t last = b - 1;
        const long double span = static_cast<long double>(kx[last] - kx[a]);
        if (!(span > 0.0L)) return false;
        const long double slope = (kq[last] - kq[a]) / span;
        value = kq[a] + slope * static_cast<long double>(x - kx[a]);
        return true;
    };
    for (std::size_t i = 1; i < n; ++i) {
        const double e = reference.edge(i);
        long double value = 0.0L;
        if (!cell_line(i, e, value) && !cell_line(i - 1, e, value)) value = cdf_at(e);
        const auto above = std::lower_bound(kx.begin(), kx.end(), e);
        const long double lo = above == kx.begin() ? lo_end : kq[static_cast<std::size_t>(above - kx.begin()) - 1];
        const long double hi = above == kx.end() ? hi_end : kq[static_cast<std::size_t>(above - kx.begin())];
        edge_g[i] = std::clamp(value, lo, hi);
    }

    auto reference_cdf = [&](long double y) -> long double {
        const long double u = (y - lo_end) / static_cast<long double>(dx);
        if (u <= 0.0L) return 0.0L;
        if (u >= static_cast<long double>(n)) return 1.0L;
        const auto cell = std::min(static_cast<std::size_t>(u), n - 1);
        const long double t = u - static_cast<long double>(cell);
        return ref_cdf[cell] + t * (ref_cdf[cell + 1] - ref_cdf[cell]);
    };
    std::vector<long double> edge_cdf_values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) edge_cdf_values[i] = reference_cdf(edge_g[i]);
    edge_cdf_values.front() = 0.0L;
    edge_cdf_values.back() = 1.0L;

    Density1D out{std::vector<double>(n, 0.0), reference.x1, reference.x2};
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = edge_cdf_values[i + 1] - edge_cdf_values[i];
        out.samples[i] = static_cast<double>(std::max(d, 0.0L)) / dx * map.mass;
    }
    return out;
}

}  // namespace rcdtpod
