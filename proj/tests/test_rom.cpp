#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rcdtpod/error.hpp"
#include "rcdtpod/rom.hpp"
#include "rcdtpod/synth.hpp"

using namespace rcdtpod;

namespace {

SpaceOptions space(SpaceKind kind, std::size_t angles = 0) {
    SpaceOptions s;
    s.kind = kind;
    s.rcdt.n_angles = angles;
    return s;
}

SnapshotSet blob_family(std::size_t n) {
    SnapshotSet s;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k);
        s.snapshots.push_back(oracle::gaussian_blob(40, 48, 14.0 + 1.5 * t, 12.0 + 2.0 * t, 4.0 + 0.2 * t));
        s.params.push_back({t});
    }
    return s;
}

}  // namespace

TEST_CASE("space names") {
    for (auto k : {SpaceKind::Physical, SpaceKind::Fourier, SpaceKind::Rcdt, SpaceKind::RcdtSigned}) {
        CHECK(parse_space_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_space_kind("wavelet"), ValidationError);
}

TEST_CASE("physical and Fourier encodings invert") {
    for (auto [rows, cols] : {std::pair{6, 8}, std::pair{7, 9}, std::pair{5, 4}}) {
        const Field2D f = oracle::tabulate(rows, cols, [](double r, double c) { return std::sin(r * 1.3) + 0.1 * c * c - r * c; });
        const SpaceGeometry p = make_geometry(space(SpaceKind::Physical), rows, cols);
        CHECK(decode(encode(f, p), p) == f);
        const SpaceGeometry g = make_geometry(space(SpaceKind::Fourier), rows, cols);
        const Representation rep = encode(f, g);
        REQUIRE(rep.parts.size() == 1);
        CHECK(oracle::l2_diff(decode(rep, g), f) <= 1e-12 * oracle::l2(f));
        // Half of an orthonormal spectrum: between half and all of the energy.
        CHECK(rep.parts[0].norm() <= oracle::l2(f) * (1 + 1e-12));
        CHECK(rep.parts[0].norm() >= oracle::l2(f) / std::sqrt(2.0));
    }
}

TEST_CASE("RCDT encoding matches the transform roundtrip") {
    const Field2D f = oracle::gaussian_blob(40, 40, 18, 22, 5);
    const SpaceGeometry g = make_geometry(space(SpaceKind::Rcdt, 24), 40, 40);
    const Representation rep = encode(f, g);
    REQUIRE(rep.masses.size() == 1);
    CHECK(rep.masses[0] == doctest::Approx(f.sum()).epsilon(1e-12));
    RoundtripOptions o;
    o.rcdt.n_angles = 24;
    const RoundtripResult rt = roundtrip_report(f, uniform_reference(40, 40), o);
    RepairStats stats;
    CHECK(oracle::l2_diff(decode(rep, g, &stats), rt.reconstruction) <= 1e-12 * oracle::l2(f));
    CHECK(stats.repaired_columns == 0);

    Representation broken = rep;
    std::swap(broken.parts[0](3), broken.parts[0](30));
    RepairStats repaired;
    decode(broken, g, &repaired);
    CHECK(repaired.repaired_columns >= 1);
    CHECK(repaired.magnitude > 0.0);
}

TEST_CASE("pair interpolation is symmetric") {
    const Field2D a = oracle::gaussian_blob(32, 36, 10, 10, 4);
    const Field2D b = difference(oracle::gaussian_blob(32, 36, 20, 24, 5), scaled(oracle::gaussian_blob(32, 36, 8, 26, 3), 0.5));
    const Field2D a_pos = a;
    const Field2D b_pos = oracle::gaussian_blob(32, 36, 20, 24, 5);
    for (double w : {0.0, 0.1, 0.3, 0.5, 0.7, 1.0}) {
        for (auto k : {SpaceKind::Physical, SpaceKind::Fourier, SpaceKind::Rcdt}) {
            CHECK(interpolate_pair(a_pos, b_pos, w, space(k, 16)) == interpolate_pair(b_pos, a_pos, 1.0 - w, space(k, 16)));
        }
        CHECK(interpolate_pair(a, b, w, space(SpaceKind::RcdtSigned, 16)) ==
              interpolate_pair(b, a, 1.0 - w, space(SpaceKind::RcdtSigned, 16)));
    }
    CHECK(interpolate_pair(a, b, 0.0, space(SpaceKind::Physical)) == a);
    CHECK_THROWS_AS(interpolate_pair(a, b, 1.5, space(SpaceKind::Physical)), ValidationError);
}

TEST_CASE("midpoint of two translated blobs") {
    const Field2D a = oracle::gaussian_blob(80, 80, 30, 25, 5);
    const Field2D b = oracle::gaussian_blob(80, 80, 50, 55, 5);
    const Field2D mid = oracle::gaussian_blob(80, 80, 40, 40, 5);
    CHECK(relative_error(mid, interpolate_pair(a, b, 0.5, space(SpaceKind::Rcdt))) <= 5e-2);
    const Field2D ghost = interpolate_pair(a, b, 0.5, space(SpaceKind::Physical));
    CHECK(ghost.max() == doctest::Approx(0.5 * a.max()).epsilon(1e-3));
    CHECK(count_components(ghost, 0.25) == 2);
}

TEST_CASE("models reproduce training nodes") {
    const SnapshotSet set = blob_family(2);
    for (auto k : {SpaceKind::Physical, SpaceKind::Fourier}) {
        RomConfig rc;
        rc.space = space(k);
        rc.modes = 2;
        const RomModel m = build(set, rc);
        for (std::size_t i = 0; i < 2; ++i) {
            const Field2D p = predict(m, set.params[i]).field;
            CHECK(oracle::l2_diff(p, set.snapshots[i]) <= 1e-8 * oracle::l2(set.snapshots[i]));
        }
    }
    const SnapshotSet four = blob_family(4);
    for (auto k : {SpaceKind::Physical, SpaceKind::Rcdt}) {
        RomConfig rc;
        rc.space = space(k, 24);
        rc.modes = 2;
        const RomModel m = build(four, rc);
        for (std::size_t i = 0; i < 4; ++i) {
            const Prediction p = predict(m, four.params[i]);
            CHECK_FALSE(p.extrapolated);
            CHECK(oracle::l2_diff(p.field, reconstruct_training(m, four, i)) <= 1e-8 * oracle::l2(p.field));
        }
        CHECK(predict(m, {5.0}).extrapolated);
    }
}

TEST_CASE("constant-in-parameter data") {
    SnapshotSet set;
    const Field2D f = oracle::gaussian_blob(24, 24, 11, 12, 3);
    for (int k = 0; k < 3; ++k) {
        set.snapshots.push_back(f);
        set.params.push_back({static_cast<double>(k)});
    }
    for (auto reg : {RegressorKind::Linear, RegressorKind::Rbf}) {
        RomConfig rc;
        rc.modes = 1;
        rc.regressor = reg;
        const Field2D p = predict(build(set, rc), {1.4}).field;
        CHECK(oracle::l2_diff(p, f) <= 1e-6 * oracle::l2(f));
    }
    // Zero prior mean: GPR reproduces the constant only at its nodes.
    RomConfig rc;
    rc.modes = 1;
    rc.regressor = RegressorKind::Gpr;
    const RomModel gpr = build(set, rc);
    CHECK(oracle::l2_diff(predict(gpr, {1.0}).field, f) <= 1e-6 * oracle::l2(f));
    CHECK(oracle::l2_diff(predict(gpr, {1.4}).field, f) <= 0.2 * oracle::l2(f));
}

TEST_CASE("projection study") {
    const SnapshotSet set = blob_family(6);
    const auto phys = projection_study(set, space(SpaceKind::Physical), {1, 2, 3, 6});
    REQUIRE(phys.size() == 4);
    for (double e : phys.back().report.per_snapshot) CHECK(e <= 1e-9);
    const auto sv = space_singular_values(set, space(SpaceKind::Physical));
    REQUIRE(sv.size() == 1);
    double total = 0.0;
    for (double s : sv[0].values) total += s * s;
    for (const auto& entry : phys) {
        double tail = 0.0;
        for (std::size_t i = entry.r; i < sv[0].values.size(); ++i) tail += sv[0].values[i] * sv[0].values[i];
        const double expected = std::sqrt(tail / total);
        CHECK(std::abs(entry.aggregate - expected) <= 1e-8 * expected + 1e-12);
    }
    const auto rc = projection_study(set, space(SpaceKind::Rcdt, 24), {1, 2, 4, 6});
    for (std::size_t i = 1; i < rc.size(); ++i) CHECK(rc[i].aggregate <= rc[i - 1].aggregate + 1e-12);
    CHECK_THROWS_AS(projection_study(set, space(SpaceKind::Physical), {7}), ValidationError);
}

TEST_CASE("wave analog projections") {
    WaveAnalogConfig cfg;
    SnapshotSet set;
    for (std::size_t k = 0; k < 200; k += 10) {
        set.snapshots.push_back(make_wave_snapshot(cfg, static_cast<double>(k)));
        set.params.push_back({static_cast<double>(k)});
    }
    const auto phys = projection_study(set, space(SpaceKind::Physical), {5, 20});
    CHECK(phys[1].report.mean < phys[0].report.mean);
    // Default angle count; at 64 angles the intrinsic roundtrip error alone exceeds the physical error.
    const auto rc = projection_study(set, space(SpaceKind::Rcdt), {5});
    CHECK(rc[0].report.mean < phys[0].report.mean);
}

TEST_CASE("encoding is deterministic") {
    const Field2D f = make_signed_dipole(0.2, DipoleConfig{40, 60, 5});
    const SpaceGeometry g = make_geometry(space(SpaceKind::RcdtSigned, 20), 40, 60);
    const Representation a = encode(f, g), b = encode(f, g);
    REQUIRE(a.parts.size() == 2);
    CHECK(a.parts[0] == b.parts[0]);
    CHECK(a.parts[1] == b.parts[1]);
    CHECK(a.masses == b.masses);
}
