#pragma once

// File formats: behaviors as JSON, curves and samples as CSV, and the run
// manifest written next to every output file.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nonsig/behavior.hpp"
#include "nonsig/boundary_scan.hpp"
#include "nonsig/geometry_analysis.hpp"
#include "nonsig/membership.hpp"

namespace nonsig {

std::string library_version();

/// Shortest-round-trip-safe text for a double with `digits` significant
/// digits ("nan", "inf" and "-inf" for non-finite values).
std::string format_double(double v, int digits = 17);

// Behavior JSON:
//   {"marginals_a": [a0, a1], "marginals_b": [b0, b1],
//    "correlations": [[c00, c01], [c10, c11]]}
std::string correlators_to_json(const Correlators& c);
/// Throws ParseError on malformed JSON or missing / non-numeric fields.
Correlators correlators_from_json(std::string_view text);

/// Infinite slacks (degenerate NPA branch) are written as null.
std::string report_to_json(const MembershipReport& r);
std::string inflection_to_json(const InflectionEstimate& e);
std::string kinks_to_json(const std::vector<Kink>& kinks);

inline constexpr std::string_view kCurveHeader = "s,i,converged,a0,a1,b0,b1,c00,c01,c10,c11";
inline constexpr std::string_view kTrajectoryHeader = "s,a0,a1,c00,c01,c11";

void write_curve_csv(std::ostream& out, const BoundaryCurve& curve);
void write_curve_csv(const std::filesystem::path& path, const BoundaryCurve& curve);
/// Throws ParseError (with line number) for an empty file, a wrong header,
/// a malformed row or an s column that does not increase.
BoundaryCurve read_curve_csv(std::istream& in);
BoundaryCurve read_curve_csv(const std::filesystem::path& path);

void write_trajectory_csv(std::ostream& out, const Trajectory& t);
/// Columns s,i, plus the eight correlators when `full`.
void write_sample_csv(std::ostream& out, std::span<const Behavior> behaviors, bool full);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string sha256_hex(std::string_view bytes);
/// Throws std::runtime_error when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command_line;
    std::uint64_t seed = 0;
    std::string version = library_version();
    double wall_time = 0.0;  // seconds
    std::map<std::string, std::string> checksums;  // file name -> SHA-256

    void add_output(const std::filesystem::path& path);
    std::string to_json() const;
};

/// `<output>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace nonsig
