#include "rcdtpod/rom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <unsupported/Eigen/FFT>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

std::string_view to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::Physical: return "physical";
        case SpaceKind::Fourier: return "fourier";
        case SpaceKind::Rcdt: return "rcdt";
        case SpaceKind::RcdtSigned: return "rcdt-signed";
    }
    return "unknown";
}

SpaceKind parse_space_kind(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    for (auto kind : {SpaceKind::Physical, SpaceKind::Fourier, SpaceKind::Rcdt, SpaceKind::RcdtSigned}) {
        if (s == to_string(kind)) return kind;
    }
    throw ValidationError("unknown space '" + std::string(name) + "'");
}

std::string_view to_string(MassMode mode) {
    return mode == MassMode::Regress ? "regress" : "training-mean";
}

SpaceGeometry make_geometry(const SpaceOptions& options, std::size_t rows, std::size_t cols, Extent extent) {
    SpaceGeometry g;
    g.options = options;
    g.rows = rows;
    g.cols = cols;
    g.extent = extent;
    if (options.uses_rcdt()) {
        g.n_s = projection_length(rows, cols);
        g.angles = uniform_angles(options.rcdt.n_angles == 0 ? default_angle_count(rows, cols) : options.rcdt.n_angles);
        g.reference = uniform_reference(rows, cols);
    }
    return g;
}

namespace {

using Complex = std::complex<double>;

std::size_t part_count(SpaceKind kind) { return kind == SpaceKind::RcdtSigned ? 2 : 1; }

// Orthonormal 2-D DFT keeping columns 0 ... cols / 2 of the spectrum.
Eigen::VectorXd fourier_forward(const Field2D& field) {
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    const std::size_t half = cols / 2 + 1;
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    std::vector<std::vector<Complex>> spectrum(rows);
    std::vector<double> row(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) row[c] = field(r, c);
        fft.fwd(spectrum[r], row);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows * cols));
    Eigen::VectorXd out(static_cast<Eigen::Index>(2 * rows * half));
    const auto im_offset = static_cast<Eigen::Index>(rows * half);
    std::vector<Complex> column(rows);
    std::vector<Complex> transformed;
    for (std::size_t h = 0; h < half; ++h) {
        for (std::size_t r = 0; r < rows; ++r) column[r] = spectrum[r][h];
        fft.fwd(transformed, column);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto idx = static_cast<Eigen::Index>(r * half + h);
            out(idx) = transformed[r].real() * scale;
            out(im_offset + idx) = transformed[r].imag() * scale;
        }
    }
    return out;
}

// Imaginary parts that conjugate symmetry forbids (DC and Nyquist columns)
// are discarded by the real inverse along rows.
Field2D fourier_inverse(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols, const Extent& extent) {
    const std::size_t half = cols / 2 + 1;
    if (static_cast<std::size_t>(v.size()) != 2 * rows * half) throw ValidationError("fourier: vector length mismatch");
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    const double scale = std::sqrt(static_cast<double>(rows * cols));
    const auto im_offset = static_cast<Eigen::Index>(rows * half);
    std::vector<std::vector<Complex>> spectrum(rows, std::vector<Complex>(half));
    std::vector<Complex> column(rows);
    std::vector<Complex> transformed;
    for (std::size_t h = 0; h < half; ++h) {
        for (std::size_t r = 0; r < rows; ++r) {
            const auto idx = static_cast<Eigen::Index>(r * half + h);
            column[r] = Complex(v(idx), v(im_offset + idx)) * scale;
        }
        fft.inv(transformed, column);
        for (std::size_t r = 0; r < rows; ++r) spectrum[r][h] = transformed[r];
    }
    std::vector<double> values(rows * cols);
    std::vector<double> row;
    for (std::size_t r = 0; r < rows; ++r) {
        fft.inv(row, spectrum[r], static_cast<Eigen::Index>(cols));
        std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    return Field2D(rows, cols, std::move(values), extent);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd to_vector(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Field2D decode_rcdt_part(const Eigen::VectorXd& maps, double mass, const SpaceGeometry& g, RepairStats& stats) {
    RcdtImage img;
    img.n_s = g.n_s;
    img.angles = g.angles;
    img.rows = g.rows;
    img.cols = g.cols;
    img.extent = g.extent;
    img.mass = std::max(mass, 0.0);
    if (static_cast<std::size_t>(maps.size()) != g.n_s * g.angles.size()) {
        throw ValidationError("decode: map vector length does not match the geometry");
    }
    img.maps.assign(maps.data(), maps.data() + maps.size());
    std::vector<double> column(g.n_s);
    for (std::size_t k = 0; k < g.angles.size(); ++k) {
        const auto begin = img.maps.begin() + static_cast<std::ptrdiff_t>(k * g.n_s);
        std::copy(begin, begin + static_cast<std::ptrdiff_t>(g.n_s), column.begin());
        std::vector<double> fixed = is_non_decreasing(column) ? column : isotonic_fit(column);
        bool changed = false;
        for (std::size_t j = 0; j < g.n_s; ++j) {
            fixed[j] = std::clamp(fixed[j], g.reference.x1, g.reference.x2);
            const double delta = std::abs(fixed[j] - column[j]);
            if (delta > 0.0) changed = true;
            stats.magnitude = std::max(stats.magnitude, delta);
        }
        if (changed) ++stats.repaired_columns;
        std::copy(fixed.begin(), fixed.end(), begin);
    }
    return rcdt_inverse(img, g.reference, g.options.rcdt);
}

void check_shape(const Field2D& field, const SpaceGeometry& g) {
    if (field.rows() != g.rows || field.cols() != g.cols) {
        throw ValidationError("field shape " + std::to_string(field.rows()) + "x" + std::to_string(field.cols()) +
                              " does not match the model shape " + std::to_string(g.rows) + "x" + std::to_string(g.cols));
    }
}

}  // namespace

Representation encode(const Field2D& field, const SpaceGeometry& g) {
    check_shape(field, g);
    Representation rep;
    switch (g.options.kind) {
        case SpaceKind::Physical: rep.parts.push_back(to_vector(field.values())); break;
        case SpaceKind::Fourier: rep.parts.push_back(fourier_forward(field)); break;
        case SpaceKind::Rcdt: {
            const RcdtImage img = rcdt_forward(field, g.reference, g.options.rcdt);
            rep.parts.push_back(to_vector(img.maps));
            rep.masses.push_back(img.mass);
            break;
        }
        case SpaceKind::RcdtSigned: {
            const SignedRcdtImage img = rcdt_forward_signed(field, g.reference, g.options.rcdt);
            for (const RcdtImage* part : {&img.positive_part, &img.negative_part}) {
                rep.parts.push_back(to_vector(part->maps));
                rep.masses.push_back(part->mass);
            }
            break;
        }
    }
    return rep;
}

Field2D decode(const Representation& rep, const SpaceGeometry& g, RepairStats* repair) {
    if (rep.parts.size() != part_count(g.options.kind)) throw ValidationError("decode: wrong number of parts");
    RepairStats stats;
    Field2D out = [&] {
        switch (g.options.kind) {
            case SpaceKind::Physical: {
                const Eigen::VectorXd& v = rep.parts.front();
                if (static_cast<std::size_t>(v.size()) != g.rows * g.cols) throw ValidationError("decode: length mismatch");
                return Field2D(g.rows, g.cols, std::vector<double>(v.data(), v.data() + v.size()), g.extent);
            }
            case SpaceKind::Fourier: return fourier_inverse(rep.parts.front(), g.rows, g.cols, g.extent);
            case SpaceKind::Rcdt:
                if (rep.masses.size() != 1) throw ValidationError("decode: missing mass");
                return decode_rcdt_part(rep.parts.front(), rep.masses.front(), g, stats);
            case SpaceKind::RcdtSigned: {
                if (rep.masses.size() != 2) throw ValidationError("decode: missing masses");
                const Field2D pos = decode_rcdt_part(rep.parts[0], rep.masses[0], g, stats);
                if (!(rep.masses[1] > 0.0)) return pos;
                return difference(pos, decode_rcdt_part(rep.parts[1], rep.masses[1], g, stats));
            }
        }
        throw RuntimeError("decode: unknown space");
    }();
    if (repair) *repair = stats;
    return out;
}

namespace {

std::vector<Representation> encode_all(const SnapshotSet& set, const SpaceGeometry& g) {
    std::vector<Representation> reps;
    reps.reserve(set.size());
    for (const auto& f : set.snapshots) reps.push_back(encode(f, g));
    return reps;
}

SnapshotMatrix part_matrix(const std::vector<Representation>& reps, std::size_t part, bool center) {
    const Eigen::Index n_rows = reps.front().parts[part].size();
    Eigen::MatrixXd m(n_rows, static_cast<Eigen::Index>(reps.size()));
    for (std::size_t j = 0; j < reps.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = reps[j].parts[part];
    return assemble_columns(std::move(m), center);
}

SpaceGeometry geometry_for(const SnapshotSet& set, const SpaceOptions& space) {
    if (set.size() == 0) throw ValidationError("empty snapshot set");
    const Field2D& first = set.snapshots.front();
    return make_geometry(space, first.rows(), first.cols(), first.extent());
}

}  // namespace

RomModel build(const SnapshotSet& training, const RomConfig& config) {
    if (training.size() < 2) throw ValidationError("rom: at least two training snapshots are required");
    training.validate(true);
    if (config.modes < 1 || config.modes > training.size()) {
        throw ValidationError("rom: modes = " + std::to_string(config.modes) + " outside [1, " +
                              std::to_string(training.size()) + "]");
    }
    RomModel model;
    model.config = config;
    model.geometry = geometry_for(training, config.space);
    model.training_params = training.params;

    const std::vector<Representation> reps = encode_all(training, model.geometry);
    const std::size_t parts = part_count(config.space.kind);
    const auto n = static_cast<Eigen::Index>(training.size());
    const auto r = static_cast<Eigen::Index>(config.modes);
    Eigen::MatrixXd coeffs(n, r * static_cast<Eigen::Index>(parts));
    for (std::size_t p = 0; p < parts; ++p) {
        const SnapshotMatrix mat = part_matrix(reps, p, config.center);
        model.bases.push_back(compute_basis(mat, config.modes));
        const PodBasis& basis = model.bases.back();
        for (Eigen::Index j = 0; j < n; ++j) {
            coeffs.block(j, static_cast<Eigen::Index>(p) * r, 1, r) =
                (basis.modes.transpose() * mat.data.col(j)).transpose();
        }
    }
    model.coefficients = Regressor::fit(config.regressor, training.params, coeffs);

    if (config.space.uses_rcdt()) {
        Eigen::MatrixXd masses(n, static_cast<Eigen::Index>(parts));
        for (Eigen::Index j = 0; j < n; ++j) {
            model.training_masses.push_back(reps[static_cast<std::size_t>(j)].masses);
            for (std::size_t p = 0; p < parts; ++p) {
                masses(j, static_cast<Eigen::Index>(p)) = reps[static_cast<std::size_t>(j)].masses[p];
            }
        }
        if (config.mass_mode == MassMode::Regress) {
            model.masses = Regressor::fit(config.regressor, training.params, masses);
        }
    }
    return model;
}

Prediction predict(const RomModel& model, const std::vector<double>& param) {
    const Eigen::RowVectorXd c = model.coefficients.predict(param);
    const auto r = static_cast<Eigen::Index>(model.config.modes);
    Representation rep;
    for (std::size_t p = 0; p < model.bases.size(); ++p) {
        rep.parts.push_back(reconstruct(model.bases[p], c.segment(static_cast<Eigen::Index>(p) * r, r).transpose()));
    }
    if (model.config.space.uses_rcdt()) {
        if (model.masses) {
            const Eigen::RowVectorXd m = model.masses->predict(param);
            rep.masses.assign(m.data(), m.data() + m.size());
        } else {
            rep.masses.assign(model.bases.size(), 0.0);
            for (const auto& tm : model.training_masses) {
                for (std::size_t p = 0; p < tm.size(); ++p) rep.masses[p] += tm[p];
            }
            for (double& m : rep.masses) m /= static_cast<double>(model.training_masses.size());
        }
    }
    Prediction out{Field2D::filled(model.geometry.rows, model.geometry.cols, 0.0, model.geometry.extent),
                   model.coefficients.extrapolates(param), {}};
    out.field = decode(rep, model.geometry, &out.repair);
    return out;
}

Field2D reconstruct_training(const RomModel& model, const SnapshotSet& training, std::size_t i) {
    if (i >= training.size()) throw ValidationError("reconstruct_training: index out of range");
    Representation rep = encode(training.snapshots[i], model.geometry);
    for (std::size_t p = 0; p < model.bases.size(); ++p) {
        rep.parts[p] = reconstruct(model.bases[p], project(model.bases[p], rep.parts[p]));
    }
    return decode(rep, model.geometry);
}

std::vector<ProjectionStudyEntry> projection_study(const SnapshotSet& snapshots, const SpaceOptions& space,
                                                   const std::vector<std::size_t>& r_values, bool center) {
    snapshots.validate(false);
    const SpaceGeometry g = geometry_for(snapshots, space);
    const std::vector<Representation> reps = encode_all(snapshots, g);
    const std::size_t parts = part_count(space.kind);

    std::vector<Decomposition> decs;
    for (std::size_t p = 0; p < parts; ++p) decs.push_back(decompose(part_matrix(reps, p, center)));

    double total_sq = 0.0;
    for (const auto& f : snapshots.snapshots) {
        for (double v : f.values()) total_sq += v * v;
    }

    std::vector<ProjectionStudyEntry> out;
    for (std::size_t r : r_values) {
        std::vector<PodBasis> bases;
        for (const auto& d : decs) bases.push_back(truncate(d, r));
        ProjectionStudyEntry entry;
        entry.r = r;
        std::vector<double> errors;
        double err_sq = 0.0;
        for (std::size_t i = 0; i < snapshots.size(); ++i) {
            Representation rep = reps[i];
            for (std::size_t p = 0; p < parts; ++p) rep.parts[p] = reconstruct(bases[p], project(bases[p], rep.parts[p]));
            RepairStats stats;
            const Field2D approx = decode(rep, g, &stats);
            entry.repair.repaired_columns += stats.repaired_columns;
            entry.repair.magnitude = std::max(entry.repair.magnitude, stats.magnitude);
            const Field2D& truth = snapshots.snapshots[i];
            errors.push_back(relative_error(truth, approx));
            for (std::size_t k = 0; k < truth.size(); ++k) {
                const double d = truth.values()[k] - approx.values()[k];
                err_sq += d * d;
            }
        }
        entry.report = ErrorReport::from_errors(std::move(errors), NormKind::L2);
        entry.aggregate = total_sq > 0.0 ? std::sqrt(err_sq / total_sq) : 0.0;
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<SingularValueSeries> space_singular_values(const SnapshotSet& snapshots, const SpaceOptions& space) {
    snapshots.validate(false);
    const SpaceGeometry g = geometry_for(snapshots, space);
    const std::vector<Representation> reps = encode_all(snapshots, g);
    std::vector<SingularValueSeries> out;
    const std::size_t parts = part_count(space.kind);
    for (std::size_t p = 0; p < parts; ++p) {
        const Decomposition d = decompose(part_matrix(reps, p, false));
        std::string name(to_string(space.kind));
        if (parts == 2) name += p == 0 ? "+" : "-";
        out.push_back({name, std::vector<double>(d.singular_values.data(), d.singular_values.data() + d.singular_values.size())});
    }
    return out;
}

Field2D interpolate_pair(const Field2D& a, const Field2D& b, double weight, const SpaceOptions& space) {
    if (!(weight >= 0.0 && weight <= 1.0)) throw ValidationError("interpolate_pair: weight must lie in [0, 1]");
    if (!a.same_shape(b)) throw ValidationError("interpolate_pair: fields differ in shape");
    const SpaceGeometry g = make_geometry(space, a.rows(), a.cols(), a.extent());
    // The larger weight is taken as given and the smaller one is its exact
    // complement, so swapping (a, b, w) for (b, a, 1 - w) reproduces the
    // same pair of weights.
    double wa = 0.0;
    double wb = 0.0;
    if (weight >= 0.5) {
        wb = weight;
        wa = 1.0 - weight;
    } else {
        wa = 1.0 - weight;
        wb = 1.0 - wa;
    }
    const Representation ra = encode(a, g);
    const Representation rb = encode(b, g);
    Representation mix;
    for (std::size_t p = 0; p < ra.parts.size(); ++p) mix.parts.push_back(wa * ra.parts[p] + wb * rb.parts[p]);
    for (std::size_t p = 0; p < ra.masses.size(); ++p) mix.masses.push_back(wa * ra.masses[p] + wb * rb.masses[p]);
    return decode(mix, g);
}

}  // namespace rcdtpod
