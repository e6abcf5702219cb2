#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcdtpod/grid.hpp"
#include "rcdtpod/pod.hpp"

namespace rcdtpod {

/// Text field format: header `f2d <rows> <cols> <x_min> <x_max> <y_min> <y_max>`
/// followed by one line per row (top row first) of shortest round-trip
/// decimals.
std::string serialize_field(const Field2D& field);

/// Throws ValidationError naming `source` and the 1-based line on malformed
/// input.
Field2D parse_field(std::string_view text, std::string_view source = "<string>");

Field2D read_field(const std::filesystem::path& path);
void write_field(const Field2D& field, const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

struct ManifestEntry {
    std::size_t index = 0;
    std::vector<double> params;
    std::filesystem::path path;  // as written; resolved against the manifest directory on load
};

/// CSV `index,<param names...>,path`, rows sorted by unique index.
struct Manifest {
    std::vector<std::string> param_names;
    std::vector<ManifestEntry> entries;
};

Manifest parse_manifest(std::string_view text, std::string_view source = "<string>");
Manifest read_manifest(const std::filesystem::path& path);
std::string serialize_manifest(const Manifest& manifest);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Reads every referenced field (relative paths resolve against the
/// manifest's directory). With `require_distinct_params` duplicate
/// parameter rows are rejected.
SnapshotSet load_snapshots(const std::filesystem::path& manifest_path, bool require_distinct_params);

/// 16-bit binary PGM mapping [lo, hi] linearly onto [0, 65535]; defaults
/// are the field range. A degenerate range maps to mid-gray.
void export_pgm(const Field2D& field, const std::filesystem::path& path, std::optional<double> lo = std::nullopt,
                std::optional<double> hi = std::nullopt);

/// Signed field mapped symmetrically: [-m, m] with m = max |value|.
void export_pgm_signed(const Field2D& field, const std::filesystem::path& path);

struct PgmImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint16_t> pixels;
};

PgmImage read_pgm(const std::filesystem::path& path);

struct ScatteredPoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

/// Inverse-distance (power 2) average of the k nearest points at every cell
/// centre of the target grid (top row at y_max). A point closer than 1e-12
/// is returned exactly.
Field2D regrid_scattered(const std::vector<ScatteredPoint>& points, std::size_t rows, std::size_t cols,
                         const Extent& extent, std::size_t k = 4);

/// `snapshot,param,error`; multi-valued params are joined with ';'.
std::string error_csv(const ErrorReport& report, const std::vector<std::vector<double>>& params);

/// `space,index,sigma,ratio`.
std::string singular_value_csv(const std::vector<SingularValueRow>& rows);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

}  // namespace rcdtpod
