#include "rcdtpod/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <system_error>

#include "rcdtpod/error.hpp"

namespace rcdtpod {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out = split(text, '\n');
    if (!out.empty() && out.back().empty()) out.pop_back();
    for (auto& l : out) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
    return out;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& what) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

double to_double(std::string_view tok, std::string_view source, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        parse_fail(source, line, "invalid number '" + std::string(tok) + "'");
    }
    return v;
}

std::size_t to_size(std::string_view tok, std::string_view source, std::size_t line) {
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        parse_fail(source, line, "invalid count '" + std::string(tok) + "'");
    }
    return v;
}

}  // namespace

std::string serialize_field(const Field2D& field) {
    const Extent& e = field.extent();
    std::string out = "f2d " + std::to_string(field.rows()) + " " + std::to_string(field.cols()) + " " +
                      format_double(e.x_min) + " " + format_double(e.x_max) + " " + format_double(e.y_min) + " " +
                      format_double(e.y_max) + "\n";
    for (std::size_t r = 0; r < field.rows(); ++r) {
        for (std::size_t c = 0; c < field.cols(); ++c) {
            if (c > 0) out += ' ';
            out += format_double(field(r, c));
        }
        out += '\n';
    }
    return out;
}

Field2D parse_field(std::string_view text, std::string_view source) {
    const auto lines = lines_of(text);
    if (lines.empty()) parse_fail(source, 1, "empty file");
    const auto head = tokens(lines[0]);
    if (head.size() != 7 || head[0] != "f2d") {
        parse_fail(source, 1, "expected header 'f2d <rows> <cols> <x_min> <x_max> <y_min> <y_max>'");
    }
    const std::size_t rows = to_size(head[1], source, 1);
    const std::size_t cols = to_size(head[2], source, 1);
    const Extent extent{to_double(head[3], source, 1), to_double(head[4], source, 1), to_double(head[5], source, 1),
                        to_double(head[6], source, 1)};
    if (lines.size() - 1 < rows) {
        parse_fail(source, lines.size() + 1, "expected " + std::to_string(rows) + " rows, found " + std::to_string(lines.size() - 1));
    }
    if (lines.size() - 1 > rows) parse_fail(source, rows + 2, "unexpected content after the last row");
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto toks = tokens(lines[r + 1]);
        if (toks.size() != cols) {
            parse_fail(source, r + 2, "row has " + std::to_string(toks.size()) + " values, expected " + std::to_string(cols));
        }
        for (auto t : toks) values.push_back(to_double(t, source, r + 2));
    }
    try {
        return Field2D(rows, cols, std::move(values), extent);
    } catch (const ValidationError& e) {
        parse_fail(source, 1, e.what());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RuntimeError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw RuntimeError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw RuntimeError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

Field2D read_field(const fs::path& path) { return parse_field(read_text(path), path.string()); }

void write_field(const Field2D& field, const fs::path& path) { write_text_atomic(path, serialize_field(field)); }

Manifest parse_manifest(std::string_view text, std::string_view source) {
    const auto lines = lines_of(text);
    if (lines.empty()) parse_fail(source, 1, "empty manifest");
    const auto head = split(lines[0], ',');
    if (head.size() < 2 || head.front() != "index" || head.back() != "path") {
        parse_fail(source, 1, "expected header 'index,<params...>,path'");
    }
    Manifest m;
    for (std::size_t i = 1; i + 1 < head.size(); ++i) m.param_names.emplace_back(head[i]);
    std::set<std::size_t> seen;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        if (lines[l].empty()) continue;
        const auto cells = split(lines[l], ',');
        if (cells.size() != head.size()) {
            parse_fail(source, l + 1, "expected " + std::to_string(head.size()) + " columns, found " + std::to_string(cells.size()));
        }
        ManifestEntry e;
        e.index = to_size(cells.front(), source, l + 1);
        if (!seen.insert(e.index).second) parse_fail(source, l + 1, "duplicate index " + std::to_string(e.index));
        if (!m.entries.empty() && e.index < m.entries.back().index) parse_fail(source, l + 1, "indices must be sorted");
        for (std::size_t i = 1; i + 1 < cells.size(); ++i) e.params.push_back(to_double(cells[i], source, l + 1));
        if (cells.back().empty()) parse_fail(source, l + 1, "empty path");
        e.path = fs::path(std::string(cells.back()));
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty()) parse_fail(source, 2, "manifest lists no snapshots");
    return m;
}

Manifest read_manifest(const fs::path& path) { return parse_manifest(read_text(path), path.string()); }

std::string serialize_manifest(const Manifest& manifest) {
    std::string out = "index";
    for (const auto& n : manifest.param_names) out += "," + n;
    out += ",path\n";
    for (const auto& e : manifest.entries) {
        if (e.params.size() != manifest.param_names.size()) throw ValidationError("manifest: parameter count mismatch");
        out += std::to_string(e.index);
        for (double p : e.params) out += "," + format_double(p);
        out += "," + e.path.generic_string() + "\n";
    }
    return out;
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
    write_text_atomic(path, serialize_manifest(manifest));
}

SnapshotSet load_snapshots(const fs::path& manifest_path, bool require_distinct_params) {
    const Manifest m = read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();
    SnapshotSet set;
    for (const auto& e : m.entries) {
        const fs::path p = e.path.is_absolute() ? e.path : base / e.path;
        if (!fs::exists(p)) {
            throw ValidationError(manifest_path.string() + ": snapshot " + std::to_string(e.index) + " path '" +
                                  p.string() + "' does not exist");
        }
        set.snapshots.push_back(read_field(p));
        set.params.push_back(e.params);
    }
    set.validate(require_distinct_params);
    return set;
}

void export_pgm(const Field2D& field, const fs::path& path, std::optional<double> lo, std::optional<double> hi) {
    const double a = lo.value_or(field.min());
    const double b = hi.value_or(field.max());
    std::string out = "P5\n" + std::to_string(field.cols()) + " " + std::to_string(field.rows()) + "\n65535\n";
    out.reserve(out.size() + 2 * field.size());
    const bool degenerate = !(b > a);
    for (double v : field.values()) {
        std::uint16_t q = 32768;
        if (!degenerate) {
            const double t = std::clamp((v - a) / (b - a), 0.0, 1.0);
            q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        }
        out += static_cast<char>(q >> 8);
        out += static_cast<char>(q & 0xFF);
    }
    write_text_atomic(path, out);
}

void export_pgm_signed(const Field2D& field, const fs::path& path) {
    const double m = std::max(std::abs(field.min()), std::abs(field.max()));
    export_pgm(field, path, -m, m);
}

PgmImage read_pgm(const fs::path& path) {
    const std::string data = read_text(path);
    std::istringstream in(data);
    std::string magic;
    std::size_t cols = 0;
    std::size_t rows = 0;
    unsigned maxval = 0;
    in >> magic >> cols >> rows >> maxval;
    if (!in || magic != "P5" || maxval != 65535) throw ValidationError(path.string() + ": not a 16-bit binary PGM");
    in.get();
    const auto offset = static_cast<std::size_t>(in.tellg());
    if (data.size() < offset + 2 * rows * cols) throw ValidationError(path.string() + ": truncated PGM");
    PgmImage img{rows, cols, std::vector<std::uint16_t>(rows * cols)};
    for (std::size_t i = 0; i < rows * cols; ++i) {
        const auto hi = static_cast<unsigned char>(data[offset + 2 * i]);
        const auto lo = static_cast<unsigned char>(data[offset + 2 * i + 1]);
        img.pixels[i] = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return img;
}

Field2D regrid_scattered(const std::vector<ScatteredPoint>& points, std::size_t rows, std::size_t cols,
                         const Extent& extent, std::size_t k) {
    if (points.empty()) throw ValidationError("regrid: no points");
    if (k < 1) throw ValidationError("regrid: k must be at least 1");
    if (rows < 2 || cols < 2) throw ValidationError("regrid: target must be at least 2x2");
    const std::size_t kk = std::min(k, points.size());
    const double dx = (extent.x_max - extent.x_min) / static_cast<double>(cols);
    const double dy = (extent.y_max - extent.y_min) / static_cast<double>(rows);
    std::vector<double> values(rows * cols);
    std::vector<std::pair<double, std::size_t>> d2(points.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const double y = extent.y_max - (static_cast<double>(r) + 0.5) * dy;
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = extent.x_min + (static_cast<double>(c) + 0.5) * dx;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double ex = points[i].x - x;
                const double ey = points[i].y - y;
                d2[i] = {ex * ex + ey * ey, i};
            }
            std::partial_sort(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(kk), d2.end());
            double value = 0.0;
            if (kk == 1 || std::sqrt(d2.front().first) < 1e-12) {
                value = points[d2.front().second].value;
            } else {
                double wsum = 0.0;
                for (std::size_t j = 0; j < kk; ++j) {
                    const double w = 1.0 / d2[j].first;
                    wsum += w;
                    value += w * points[d2[j].second].value;
                }
                value /= wsum;
            }
            values[r * cols + c] = value;
        }
    }
    return Field2D(rows, cols, std::move(values), extent);
}

std::string error_csv(const ErrorReport& report, const std::vector<std::vector<double>>& params) {
    std::string out = "snapshot,param,error\n";
    for (std::size_t i = 0; i < report.per_snapshot.size(); ++i) {
        std::string p;
        if (i < params.size()) {
            for (std::size_t j = 0; j < params[i].size(); ++j) {
                if (j > 0) p += ';';
                p += format_double(params[i][j]);
            }
        }
        out += std::to_string(i) + "," + p + "," + format_double(report.per_snapshot[i]) + "\n";
    }
    return out;
}

std::string singular_value_csv(const std::vector<SingularValueRow>& rows) {
    std::string out = "space,index,sigma,ratio\n";
    for (const auto& r : rows) {
        out += r.space + "," + std::to_string(r.index) + "," + format_double(r.sigma) + "," + format_double(r.ratio) + "\n";
    }
    return out;
}

}  // namespace rcdtpod
