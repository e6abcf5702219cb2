// Acceptance run: one PASS/FAIL line per criterion, thresholds read from
// data/expectations.json.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rcdtpod/bench.hpp"
#include "rcdtpod/io.hpp"
#include "rcdtpod/pod.hpp"
#include "rcdtpod/radon.hpp"
#include "rcdtpod/rcdt.hpp"
#include "rcdtpod/rom.hpp"
#include "rcdtpod/synth.hpp"

using namespace rcdtpod;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Field2D blob(std::size_t rows, std::size_t cols, double cy, double cx, double sigma) {
    std::vector<double> v(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double dr = static_cast<double>(r) - cy, dc = static_cast<double>(c) - cx;
            v[r * cols + c] = std::exp(-(dr * dr + dc * dc) / (2 * sigma * sigma));
        }
    }
    return Field2D(rows, cols, std::move(v));
}

Density1D sampled(std::size_t n, double x1, double x2, const std::function<double(double)>& f) {
    Density1D d{std::vector<double>(n), x1, x2};
    for (std::size_t i = 0; i < n; ++i) d.samples[i] = f(d.node(i));
    return d;
}

double rel_diff(const Field2D& a, const Field2D& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a.values()[i] - b.values()[i]) * (a.values()[i] - b.values()[i]);
        den += b.values()[i] * b.values()[i];
    }
    return std::sqrt(num / den);
}

bool same_files(const fs::path& a, const fs::path& b) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++n;
        const fs::path other = b / e.path().filename();
        if (!fs::exists(other) || read_text(e.path()) != read_text(other)) return false;
    }
    return n > 0;
}

Outcome roundtrip_bands(const Table1Result& t1, const json& ex) {
    Outcome o;
    const double factor = ex["band_factor"];
    for (const auto& [name, published] : ex["banded_cases"].items()) {
        const double e = t1.row(name).error();
        const double ratio = e / published.get<double>();
        o.require(ratio <= factor && ratio >= 1.0 / factor, name + " " + num(e) + " (x" + num(ratio) + ")");
    }
    return o;
}

Outcome roundtrip_orderings(const Table1Result& t1) {
    Outcome o;
    auto e = [&](const char* n) { return t1.row(n).error(); };
    o.require(e("gaussian") < e("circle-smoothed") && e("circle-smoothed") < e("circle") && e("circle") < e("circle-edge"),
              "gaussian < circle-smoothed < circle < circle-edge");
    o.require(e("circle-smoothed") < e("circle"), "circle smoothed < sharp");
    o.require(e("circle-edge-smoothed") < e("circle-edge"), "edge smoothed < sharp");
    return o;
}

Outcome travelling(const json& ex) {
    Outcome o;
    TravellingGaussianStudyConfig cfg;
    cfg.modes = ex["modes"];
    const TravellingGaussianResult r = run_travelling_gaussian(cfg);
    const double rc = r.ratio("rcdt", 5), ph = r.ratio("physical", 5);
    o.require(rc < ph, "sigma5/sigma1 rcdt " + num(rc) + " < physical " + num(ph));
    const double factor = ex["projection_factor"];
    o.require(r.rcdt.report.mean < factor * r.physical.report.mean,
              "r=5 error rcdt " + num(r.rcdt.report.mean) + " < " + num(factor) + " x physical " + num(r.physical.report.mean));
    return o;
}

Outcome twin_jets(const json& ex) {
    Outcome o;
    TwinJetStudyConfig cfg;
    cfg.level = ex["level_relative_to_max"];
    const TwinJetResult r = run_twin_jets(cfg);
    o.require(r.rcdt_components == ex["rcdt_components"].get<std::size_t>(),
              "rcdt components " + std::to_string(r.rcdt_components));
    o.require(r.physical_components >= ex["physical_components_min"].get<std::size_t>(),
              "physical components " + std::to_string(r.physical_components));
    return o;
}

Outcome wave(const json& ex) {
    Outcome o;
    WaveStudyConfig cfg;
    cfg.threshold = ex["threshold"];
    cfg.training_snapshots = ex["training_snapshots"].get<std::vector<std::size_t>>();
    cfg.target_snapshot = ex["target_snapshot"];
    const WaveStudyResult r = run_wave_analog(cfg);
    const double p = r.space(SpaceKind::Physical).l1_error;
    const double f = r.space(SpaceKind::Fourier).l1_error;
    const double c = r.space(SpaceKind::Rcdt).l1_error;
    o.require(c < p && c < f, "L1 rcdt " + num(c) + " < physical " + num(p) + ", fourier " + num(f));
    return o;
}

Outcome properties(const json& tol) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();

    {  // Radon mass per angle, smooth blob and sharp disc.
        CaseSpec disc;
        disc.kind = CaseKind::Circle;
        double spread = 0.0;
        for (const Field2D& f : {blob(120, 90, 50, 40, 12), make_field(disc)}) {
            const Sinogram s = radon_forward(f, 60);
            double lo = 1e300, hi = -1e300;
            for (std::size_t k = 0; k < s.n_angles(); ++k) {
                double m = 0.0;
                for (double v : s.column(k)) m += v * s.s_spacing;
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            spread = std::max(spread, (hi - lo) / f.sum());
        }
        o.require(spread <= tol["radon_mass_spread"].get<double>(), "radon mass spread " + num(spread));
    }
    {  // CDT reference fixed point.
        const Density1D r = sampled(200, 0.0, 10.0, [](double x) { return 0.3 + std::exp(-(x - 4) * (x - 4)); });
        const TransportMap1D m = cdt_forward(r, r);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, std::abs(m.values[i] - r.node(i)));
        o.require(worst <= tol["cdt_fixed_point"].get<double>(), "cdt fixed point " + num(worst));
    }
    {  // CDT smooth roundtrip.
        const Density1D ref = uniform_density(250, 0.0, 250.0);
        const Density1D g = sampled(250, 0.0, 250.0, [](double x) { return std::exp(-(x - 125) * (x - 125) / 200.0); });
        const Density1D back = cdt_inverse(cdt_forward(g, ref), ref);
        double num2 = 0.0, den = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            num2 += (back.samples[i] - g.samples[i]) * (back.samples[i] - g.samples[i]);
            den += g.samples[i] * g.samples[i];
        }
        const double e = std::sqrt(num2 / den);
        o.require(e <= tol["cdt_smooth_roundtrip"].get<double>(), "cdt roundtrip " + num(e));
    }
    {  // Translation transport.
        const double L = 200.0;
        const Density1D ref = sampled(400, 0.0, L, [](double x) { return std::exp(-(x - 80) * (x - 80) / 200.0); });
        const Density1D sig = sampled(400, 0.0, L, [](double x) { return std::exp(-(x - 91) * (x - 91) / 200.0); });
        const TransportMap1D m = cdt_forward(sig, ref);
        double worst = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (ref.samples[i] < 1e-3) continue;
            worst = std::max(worst, std::abs(m.values[i] - ref.node(i) - 11.0));
        }
        o.require(worst <= tol["translation_fraction_of_domain"].get<double>() * L, "translation " + num(worst));
    }
    {  // POD orthonormality, Eckart-Young tail, full-rank projection.
        std::mt19937_64 rng(17);
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::MatrixXd x(100, 20);
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = n(rng);
        }
        const Decomposition d = decompose(assemble_columns(x));
        const double ortho = (d.modes.transpose() * d.modes - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff();
        o.require(ortho <= tol["pod_orthonormality"].get<double>(), "orthonormality " + num(ortho));
        double worst_tail = 0.0, full = 0.0;
        for (std::size_t r = 1; r <= 20; ++r) {
            const PodBasis b = truncate(d, r);
            Eigen::MatrixXd approx(x.rows(), x.cols());
            for (Eigen::Index j = 0; j < x.cols(); ++j) approx.col(j) = reconstruct(b, project(b, x.col(j)));
            const double err = (x - approx).norm();
            if (r < 20) {
                const double tail = std::sqrt(d.singular_values.tail(static_cast<Eigen::Index>(20 - r)).squaredNorm());
                worst_tail = std::max(worst_tail, std::abs(err - tail) / tail);
            } else {
                full = err / x.norm();
            }
        }
        o.require(worst_tail <= tol["eckart_young_relative"].get<double>(), "tail identity " + num(worst_tail));
        o.require(full <= tol["full_rank_projection"].get<double>(), "full-rank projection " + num(full));
    }
    {  // Pair interpolation symmetry.
        const Field2D a = blob(40, 40, 12, 14, 4), b = blob(40, 40, 26, 25, 5);
        bool exact = true;
        for (auto kind : {SpaceKind::Physical, SpaceKind::Fourier, SpaceKind::Rcdt}) {
            SpaceOptions s;
            s.kind = kind;
            s.rcdt.n_angles = 20;
            for (double w : {0.1, 0.25, 0.5, 0.9}) exact = exact && interpolate_pair(a, b, w, s) == interpolate_pair(b, a, 1 - w, s);
        }
        o.require(exact, "interpolate_pair symmetry");
    }
    {  // Bitwise reproducibility of generators and reports.
        TravellingGaussianConfig cfg;
        cfg.seed = 9;
        const SnapshotSet a = make_travelling_gaussian(cfg), b = make_travelling_gaussian(cfg);
        bool same = a.snapshots == b.snapshots;
        same = same && make_wave_snapshot({}, 74.0) == make_wave_snapshot({}, 74.0);
        same = same && make_twin_jets({}) == make_twin_jets({});
        same = same && make_signed_dipole(0.3) == make_signed_dipole(0.3);
        const fs::path d1 = fs::temp_directory_path() / "rcdtpod_accept_1", d2 = fs::temp_directory_path() / "rcdtpod_accept_2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        StudySpec spec;
        spec.kind = StudyKind::TwinJetInterp;
        run_study(spec, d1);
        run_study(spec, d2);
        same = same && same_files(d1, d2);
        o.require(same, "bitwise reproducibility");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < tol["suite_seconds"].get<double>(), "ran in " + num(seconds) + " s");
    return o;
}

Outcome signed_variant(const json& tol) {
    Outcome o;
    const Field2D f = blob(80, 80, 30, 45, 7);
    const Density1D ref = uniform_reference(80, 80);
    RcdtOptions opt;
    opt.n_angles = 40;
    const Field2D s = rcdt_inverse_signed(rcdt_forward_signed(f, ref, opt), ref, opt);
    const Field2D u = rcdt_inverse(rcdt_forward(f, ref, opt), ref, opt);
    const double d = rel_diff(s, u);
    o.require(d <= tol["signed_consistency"].get<double>(), "signed vs unsigned " + num(d));

    const Field2D dip = make_signed_dipole(0.5);
    const Density1D dref = uniform_reference(dip.rows(), dip.cols());
    const SignedRcdtImage p = rcdt_forward_signed(dip, dref), n = rcdt_forward_signed(scaled(dip, -1.0), dref);
    const bool swapped = p.positive_part.maps == n.negative_part.maps && p.negative_part.maps == n.positive_part.maps &&
                         p.positive_part.mass == n.negative_part.mass && p.negative_part.mass == n.positive_part.mass;
    o.require(swapped, "negation swaps parts exactly");
    return o;
}

Outcome kappa(const json& tol) {
    Outcome o;
    const std::vector<double> s{2.0, 1.0, 1.0};
    const double full = energy_ratio(s, 3);
    o.require(full == 1.0, "kappa(r = n) = " + num(full));
    const double k1 = energy_ratio(s, 1);
    o.require(std::abs(k1 - 2.0 / 3.0) <= tol["kappa_tolerance"].get<double>(), "kappa((2,1,1), 1) = " + num(k1));
    return o;
}

}  // namespace

int main() {
    const json ex = json::parse(read_text(RCDTPOD_EXPECTATIONS));
    int failures = 0;
    auto report = [&](int id, const std::string& title, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << ": " << o.detail << " [" << num(sec)
                  << " s]" << std::endl;
    };

    Table1Result t1;
    bool have_t1 = false;
    auto suite = [&]() -> const Table1Result& {
        if (!have_t1) {
            t1 = run_table1();
            have_t1 = true;
        }
        return t1;
    };
    report(1, "roundtrip error bands", [&] { return roundtrip_bands(suite(), ex["roundtrip_suite"]); });
    report(2, "roundtrip error orderings", [&] { return roundtrip_orderings(suite()); });
    report(3, "travelling gaussian mode decay", [&] { return travelling(ex["travelling_gaussian"]); });
    report(4, "twin-jet interpolation structure", [&] { return twin_jets(ex["twin_jets"]); });
    report(5, "wave analog time interpolation", [&] { return wave(ex["wave_analog"]); });
    report(6, "property suite", [&] { return properties(ex["properties"]); });
    report(7, "signed variant", [&] { return signed_variant(ex["properties"]); });
    report(8, "energy ratio", [&] { return kappa(ex["properties"]); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
