#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rcdtpod/grid.hpp"

namespace rcdtpod {

enum class CaseKind { Circle, CircleEdge, Gaussian, TwinJets, TravellingGaussian, WaveAnalog, SignedDipole };

std::string_view to_string(CaseKind kind);
/// Accepts the snake/kebab-case names ("circle", "circle-edge", ...).
CaseKind parse_case_kind(std::string_view name);

/// Full description of one synthetic field or snapshot family. Unused
/// kind-specific parameters are ignored.
struct CaseSpec {
    CaseKind kind = CaseKind::Gaussian;
    std::size_t rows = 250;
    std::size_t cols = 250;
    bool inverted = false;
    std::optional<double> smooth_sigma;
    std::uint64_t seed = 0;

    double radius = 50.0;      // Circle, CircleEdge [px]
    double edge_width = 3.0;   // CircleEdge ring width [px]
    double sigma = 20.0;       // Gaussian width [px]
    double separation = 24.0;  // TwinJets source separation [px]
    double jet_decay = 2.0;    // TwinJets downward amplitude decay
    double jet_spread = 1.0;   // TwinJets downward width growth
    double jet_width = 3.0;    // TwinJets source profile sigma [px]
    double jet_attraction = 16.0;            // TwinJets centreline convergence rate
    double jet_critical_separation = 96.0;   // TwinJets: no convergence at or beyond [px]
    double dipole_param = 0.0; // SignedDipole parameter
    std::size_t n_steps = 100; // snapshot families
    double wave_speed = 0.5;   // WaveAnalog apex advance [cells per step]

    void validate() const;
};

/// Circle, CircleEdge, Gaussian, TwinJets or SignedDipole, with optional
/// smoothing followed by optional inversion.
Field2D make_field(const CaseSpec& spec);

/// Portable 64-bit generator (SplitMix64) with a fixed double mapping, so
/// a seed yields identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

struct TravellingGaussianConfig {
    std::size_t rows = 100;
    std::size_t cols = 100;
    std::size_t n_steps = 100;
    double sigma = 5.3;
    double mean_lo = 10.0;
    double mean_hi = 90.0;
    std::uint64_t seed = 0;
};

/// Unit-height Gaussians with means drawn uniformly per step; params are
/// the step index.
SnapshotSet make_travelling_gaussian(const TravellingGaussianConfig& config);

struct TwinJetConfig {
    std::size_t rows = 128;
    std::size_t cols = 128;
    double separation = 24.0;
    double decay = 2.0;
    double spread = 1.0;
    double width = 3.0;
    double attraction = 16.0;
    double critical_separation = 96.0;
};

/// Two plumes from top-edge sources at centre +- separation / 2; each
/// widens and fades with depth. Below the critical separation the
/// centrelines converge as exp(-attraction * (1 - s / s_crit) * depth), so
/// close pairs merge. Combined as 1 - (1 - a)(1 - b).
Field2D make_twin_jets(const TwinJetConfig& config);

struct WaveAnalogConfig {
    std::size_t n_steps = 200;
    std::size_t rows = 75;   // y cells
    std::size_t cols = 250;  // x cells
    double speed = 0.5;      // apex advance in cells per step
};

/// Binary phase field on [-2.5, 3.5] x [-0.5, 1.2]: 1 below the surface
/// y = exp(-0.5 (x - x_k)^2), where x_k moves right by speed * k cells.
/// Params are the step index k = 0 ... n_steps - 1.
SnapshotSet make_wave_analog(const WaveAnalogConfig& config);

/// Wave-analog snapshot for a single step.
Field2D make_wave_snapshot(const WaveAnalogConfig& config, double step);

struct DipoleConfig {
    std::size_t rows = 100;
    std::size_t cols = 160;
    double lobe_sigma = 8.0;
};

/// Positive lobe left of centre, negative lobe right of centre. The lobe
/// distance and the common amplitude grow smoothly with param.
Field2D make_signed_dipole(double param, const DipoleConfig& config = {});

/// Lobe centre distance used by make_signed_dipole.
double dipole_separation(double param, const DipoleConfig& config = {});

}  // namespace rcdtpod
