#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rcdtpod/error.hpp"
#include "rcdtpod/synth.hpp"

using namespace rcdtpod;

namespace {

std::pair<std::size_t, std::size_t> argmax(const Field2D& f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f.values()[i] > f.values()[best]) best = i;
    }
    return {best / f.cols(), best % f.cols()};
}

}  // namespace

TEST_CASE("case names") {
    for (auto k : {CaseKind::Circle, CaseKind::CircleEdge, CaseKind::Gaussian, CaseKind::TwinJets, CaseKind::TravellingGaussian,
                   CaseKind::WaveAnalog, CaseKind::SignedDipole}) {
        CHECK(parse_case_kind(to_string(k)) == k);
    }
    CHECK(parse_case_kind("circle_edge") == CaseKind::CircleEdge);
    CHECK_THROWS_AS(parse_case_kind("square"), ValidationError);
}

TEST_CASE("roundtrip suite fields") {
    CaseSpec spec;
    spec.kind = CaseKind::Circle;
    const Field2D circle = make_field(spec);
    CHECK(circle.sum() == doctest::Approx(std::numbers::pi * 50 * 50).epsilon(1e-2));
    for (double v : circle.values()) CHECK((v == 0.0 || v == 1.0));

    spec.kind = CaseKind::CircleEdge;
    const Field2D ring = make_field(spec);
    for (std::size_t r = 0; r < 250; ++r) {
        for (std::size_t c = 0; c < 250; ++c) {
            if (std::abs(std::hypot(r - 124.5, c - 124.5) - 50.0) > 1.5) CHECK(ring(r, c) == 0.0);
        }
    }

    spec.kind = CaseKind::Gaussian;
    const Field2D g = make_field(spec);
    CHECK(g.max() == doctest::Approx(1.0).epsilon(1e-3));
    spec.inverted = true;
    const Field2D gi = make_field(spec);
    CHECK(gi.min() == doctest::Approx(0.0).epsilon(1e-3).scale(1.0));
    const auto [r, c] = argmax(g);
    CHECK(gi(r, c) == gi.min());

    spec.kind = CaseKind::Circle;
    spec.smooth_sigma = 2.0;
    const Field2D smoothed = make_field(spec);
    for (double v : smoothed.values()) CHECK((v >= 0.0 && v <= 1.0));
    spec.kind = CaseKind::TravellingGaussian;
    CHECK_THROWS_AS(make_field(spec), ValidationError);
}

TEST_CASE("travelling gaussian family") {
    TravellingGaussianConfig cfg;
    cfg.seed = 42;
    const SnapshotSet a = make_travelling_gaussian(cfg);
    const SnapshotSet b = make_travelling_gaussian(cfg);
    REQUIRE(a.size() == 100);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.snapshots[i] == b.snapshots[i]);
    cfg.seed = 43;
    CHECK_FALSE(make_travelling_gaussian(cfg).snapshots[0] == a.snapshots[0]);

    // Discrete sum of a well-sampled Gaussian equals its integral.
    const double integral = 2.0 * std::numbers::pi * 5.3 * 5.3;
    std::size_t interior = 0;
    for (const auto& s : a.snapshots) {
        CHECK(s.max() > 0.9);
        CHECK(s.max() <= 1.0);
        const auto [r, c] = argmax(s);
        if (r < 25 || r > 74 || c < 25 || c > 74) continue;
        ++interior;
        CHECK(s.sum() == doctest::Approx(integral).epsilon(1e-3));
    }
    CHECK(interior >= 10);
}

TEST_CASE("SplitMix64 stream") {
    SplitMix64 rng(1234567);
    // Reference values of the published algorithm.
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    SplitMix64 u(0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0.0 && x < 1.0));
    }
}

TEST_CASE("twin jets") {
    TwinJetConfig cfg;
    cfg.separation = 0.0;
    const Field2D single = make_twin_jets(cfg);
    for (std::size_t r = 0; r < single.rows(); ++r) {
        for (std::size_t c = 0; c < single.cols(); ++c) CHECK(std::abs(single(r, c) - single(r, single.cols() - 1 - c)) <= 1e-12);
    }
    cfg.separation = 80.0;
    const Field2D wide = make_twin_jets(cfg);
    CHECK(oracle::components(wide, 0.3) == 2);
    cfg.separation = 16.0;
    const Field2D narrow = make_twin_jets(cfg);
    CHECK(oracle::components(narrow, 0.3) == 1);
    for (double v : wide.values()) CHECK((v >= 0.0 && v <= 1.0));
    cfg.separation = 500.0;
    CHECK_THROWS_AS(make_twin_jets(cfg), ValidationError);
}

TEST_CASE("wave analog") {
    WaveAnalogConfig cfg;
    const Field2D w0 = make_wave_snapshot(cfg, 0.0);
    const Extent e = w0.extent();
    const double dx = (e.x_max - e.x_min) / 250.0, dy = (e.y_max - e.y_min) / 75.0;
    for (std::size_t r = 0; r < 75; ++r) {
        for (std::size_t c = 0; c < 250; ++c) {
            const double x = e.x_min + (static_cast<double>(c) + 0.5) * dx;
            const double y = e.y_max - (static_cast<double>(r) + 0.5) * dy;
            CHECK(w0(r, c) == (y < std::exp(-0.5 * x * x) ? 1.0 : 0.0));
        }
    }
    // Apex column: the column with the tallest filled run.
    auto apex = [](const Field2D& f) {
        std::size_t best = 0;
        double height = -1;
        for (std::size_t c = 0; c < f.cols(); ++c) {
            double h = 0;
            for (std::size_t r = 0; r < f.rows(); ++r) h += f(r, c);
            if (h > height) {
                height = h;
                best = c;
            }
        }
        return static_cast<double>(best);
    };
    CHECK(apex(make_wave_snapshot(cfg, 100.0)) - apex(w0) == doctest::Approx(50.0).epsilon(0.04));
    const SnapshotSet set = make_wave_analog(cfg);
    CHECK(set.size() == 200);
    CHECK(set.params[74][0] == 74.0);
    for (double v : set.snapshots[150].values()) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("signed dipole") {
    const Field2D d = make_signed_dipole(0.4);
    CHECK(d.rows() == 100);
    CHECK(d.cols() == 160);
    CHECK(std::abs(d.sum()) <= 1e-9 * d.max() * 100);
    for (double v : d.values()) CHECK((v >= -1.0 && v <= 1.0));
    double previous = -1.0;
    for (double p : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const Field2D f = make_signed_dipole(p);
        const auto [r1, c1] = argmax(f);
        const auto [r2, c2] = argmax(scaled(f, -1.0));
        const double dist = std::hypot(static_cast<double>(r1) - static_cast<double>(r2), static_cast<double>(c1) - static_cast<double>(c2));
        CHECK(dist > previous);
        previous = dist;
    }
    CHECK_THROWS_AS(make_signed_dipole(NAN), ValidationError);
}
