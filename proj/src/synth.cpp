#include "rcdtpod/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

std::string_view to_string(CaseKind kind) {
    switch (kind) {
        case CaseKind::Circle: return "circle";
        case CaseKind::CircleEdge: return "circle-edge";
        case CaseKind::Gaussian: return "gaussian";
        case CaseKind::TwinJets: return "twin-jets";
        case CaseKind::TravellingGaussian: return "travelling-gaussian";
        case CaseKind::WaveAnalog: return "wave-analog";
        case CaseKind::SignedDipole: return "signed-dipole";
    }
    return "unknown";
}

CaseKind parse_case_kind(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    for (auto kind : {CaseKind::Circle, CaseKind::CircleEdge, CaseKind::Gaussian, CaseKind::TwinJets,
                      CaseKind::TravellingGaussian, CaseKind::WaveAnalog, CaseKind::SignedDipole}) {
        if (s == to_string(kind)) return kind;
    }
    throw ValidationError("unknown case kind '" + std::string(name) + "'");
}

void CaseSpec::validate() const {
    if (rows < 2 || cols < 2) throw ValidationError("case spec: size must be at least 2x2");
    if (smooth_sigma && !(*smooth_sigma > 0.0)) throw ValidationError("case spec: smooth_sigma must be positive");
    if (!(radius > 0.0) || !(edge_width > 0.0) || !(sigma > 0.0) || !(jet_width > 0.0)) {
        throw ValidationError("case spec: radius, edge_width, sigma and jet_width must be positive");
    }
    if (separation < 0.0) throw ValidationError("case spec: separation must be nonnegative");
    if (n_steps == 0) throw ValidationError("case spec: n_steps must be positive");
}

std::uint64_t SplitMix64::next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

template <class Fn>
Field2D tabulate(std::size_t rows, std::size_t cols, Fn&& fn, Extent extent = {}) {
    std::vector<double> v(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) v[r * cols + c] = fn(static_cast<double>(r), static_cast<double>(c));
    }
    return Field2D(rows, cols, std::move(v), extent);
}

}  // namespace

Field2D make_field(const CaseSpec& spec) {
    spec.validate();
    const double cy = 0.5 * static_cast<double>(spec.rows - 1);
    const double cx = 0.5 * static_cast<double>(spec.cols - 1);
    auto dist = [&](double r, double c) { return std::hypot(r - cy, c - cx); };

    Field2D field = [&] {
        switch (spec.kind) {
            case CaseKind::Circle:
                return tabulate(spec.rows, spec.cols, [&](double r, double c) { return dist(r, c) <= spec.radius ? 1.0 : 0.0; });
            case CaseKind::CircleEdge: {
                const double half = 0.5 * spec.edge_width;
                return tabulate(spec.rows, spec.cols, [&](double r, double c) {
                    return std::abs(dist(r, c) - spec.radius) <= half ? 1.0 : 0.0;
                });
            }
            case CaseKind::Gaussian: {
                const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
                return tabulate(spec.rows, spec.cols, [&](double r, double c) {
                    const double d = dist(r, c);
                    return std::exp(-d * d * inv);
                });
            }
            case CaseKind::TwinJets:
                return make_twin_jets(TwinJetConfig{spec.rows, spec.cols, spec.separation, spec.jet_decay,
                                                    spec.jet_spread, spec.jet_width, spec.jet_attraction,
                                                    spec.jet_critical_separation});
            case CaseKind::SignedDipole:
                return make_signed_dipole(spec.dipole_param, DipoleConfig{spec.rows, spec.cols, 8.0});
            case CaseKind::TravellingGaussian:
            case CaseKind::WaveAnalog:
                break;
        }
        throw ValidationError("make_field: '" + std::string(to_string(spec.kind)) +
                              "' is a snapshot family, not a single field");
    }();

    if (spec.smooth_sigma) field = smooth_gaussian(field, *spec.smooth_sigma);
    if (spec.inverted) {
        // Smoothing can leave values a rounding error outside [0, 1].
        std::vector<double> v(field.values().begin(), field.values().end());
        for (double& x : v) x = std::clamp(x, 0.0, 1.0);
        field = invert_image(Field2D(field.rows(), field.cols(), std::move(v), field.extent()));
    }
    return field;
}

SnapshotSet make_travelling_gaussian(const TravellingGaussianConfig& config) {
    if (config.n_steps == 0 || !(config.sigma > 0.0) || !(config.mean_hi >= config.mean_lo)) {
        throw ValidationError("travelling gaussian: invalid configuration");
    }
    SplitMix64 rng(config.seed);
    SnapshotSet set;
    const double inv = 1.0 / (2.0 * config.sigma * config.sigma);
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        const double mx = rng.uniform(config.mean_lo, config.mean_hi);
        const double my = rng.uniform(config.mean_lo, config.mean_hi);
        set.snapshots.push_back(tabulate(config.rows, config.cols, [&](double r, double c) {
            return std::exp(-((c - mx) * (c - mx) + (r - my) * (r - my)) * inv);
        }));
        set.params.push_back({static_cast<double>(k)});
    }
    return set;
}

Field2D make_twin_jets(const TwinJetConfig& config) {
    if (!(config.width > 0.0) || config.separation < 0.0 || config.separation > static_cast<double>(config.cols) ||
        !(config.critical_separation > 0.0) || config.attraction < 0.0) {
        throw ValidationError("twin jets: separation must lie within the domain; width and critical separation must be positive");
    }
    const double rows = static_cast<double>(config.rows);
    const double cx = 0.5 * static_cast<double>(config.cols - 1);
    const double source_row = 0.1 * rows;
    const double onset = 0.04 * rows;
    // Entrainment pulls the centrelines together below the critical
    // separation; wider pairs stay straight.
    const double pull = config.attraction * std::max(0.0, 1.0 - config.separation / config.critical_separation);
    auto jet = [&](double r, double c, double side) {
        const double depth = std::max(0.0, r - source_row) / rows;
        const double envelope = r < source_row ? std::exp(-0.5 * (r - source_row) * (r - source_row) / (onset * onset))
                                               : std::exp(-config.decay * depth);
        const double w = config.width * (1.0 + config.spread * depth);
        const double dx = c - (cx + side * 0.5 * config.separation * std::exp(-pull * depth));
        return envelope * std::exp(-0.5 * dx * dx / (w * w));
    };
    return tabulate(config.rows, config.cols, [&](double r, double c) {
        const double a = jet(r, c, -1.0);
        const double b = jet(r, c, 1.0);
        return 1.0 - (1.0 - a) * (1.0 - b);
    });
}

namespace {
constexpr Extent kWaveExtent{-2.5, 3.5, -0.5, 1.2};
}

Field2D make_wave_snapshot(const WaveAnalogConfig& config, double step) {
    const Extent e = kWaveExtent;
    const double dx = (e.x_max - e.x_min) / static_cast<double>(config.cols);
    const double dy = (e.y_max - e.y_min) / static_cast<double>(config.rows);
    const double apex = config.speed * step * dx;
    return tabulate(
        config.rows, config.cols,
        [&](double r, double c) {
            const double x = e.x_min + (c + 0.5) * dx;
            const double y = e.y_max - (r + 0.5) * dy;
            const double s = x - apex;
            return y < std::exp(-0.5 * s * s) ? 1.0 : 0.0;
        },
        e);
}

SnapshotSet make_wave_analog(const WaveAnalogConfig& config) {
    if (config.n_steps == 0) throw ValidationError("wave analog: n_steps must be positive");
    SnapshotSet set;
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        set.snapshots.push_back(make_wave_snapshot(config, static_cast<double>(k)));
        set.params.push_back({static_cast<double>(k)});
    }
    return set;
}

double dipole_separation(double param, const DipoleConfig& config) {
    return 0.2 * static_cast<double>(config.cols) + 0.25 * static_cast<double>(config.cols) * std::tanh(param);
}

Field2D make_signed_dipole(double param, const DipoleConfig& config) {
    if (!std::isfinite(param)) throw ValidationError("signed dipole: parameter must be finite");
    const double cy = 0.5 * static_cast<double>(config.rows - 1);
    const double cx = 0.5 * static_cast<double>(config.cols - 1);
    const double half = 0.5 * dipole_separation(param, config);
    const double amplitude = 0.75 + 0.2 * std::tanh(param);
    const double inv = 1.0 / (2.0 * config.lobe_sigma * config.lobe_sigma);
    return tabulate(config.rows, config.cols, [&](double r, double c) {
        const double dy2 = (r - cy) * (r - cy);
        const double left = std::exp(-((c - cx + half) * (c - cx + half) + dy2) * inv);
        const double right = std::exp(-((c - cx - half) * (c - cx - half) + dy2) * inv);
        return amplitude * (left - right);
    });
}

}  // namespace rcdtpod
