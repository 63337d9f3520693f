#include "nonsig/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

namespace {

using json = nlohmann::ordered_json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_field(std::string_view text, std::size_t line, std::string_view column) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ParseError("column " + std::string(column) + ": '" + std::string(text) + "' is not a number", line);
    return v;
}

double number_at(const json& j, const char* key, std::size_t index) {
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 2) throw ParseError(std::string("field \"") + key + "\" must be a 2-array");
    const json& v = arr.at(index);
    if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must hold numbers");
    return v.get<double>();
}

}  // namespace

std::string library_version() { return NONSIG_VERSION_STRING; }

std::string format_double(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string correlators_to_json(const Correlators& c) {
    json j;
    j["marginals_a"] = {c.a[0], c.a[1]};
    j["marginals_b"] = {c.b[0], c.b[1]};
    j["correlations"] = {{c.ab[0][0], c.ab[0][1]}, {c.ab[1][0], c.ab[1][1]}};
    return j.dump(2);
}

Correlators correlators_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("behavior JSON must be an object");
    Correlators c;
    for (std::size_t k = 0; k < 2; ++k) {
        c.a[k] = number_at(j, "marginals_a", k);
        c.b[k] = number_at(j, "marginals_b", k);
    }
    if (!j.contains("correlations") || !j["correlations"].is_array() || j["correlations"].size() != 2)
        throw ParseError("field \"correlations\" must be a 2x2 array");
    for (std::size_t x = 0; x < 2; ++x) {
        const json& row = j["correlations"][x];
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            throw ParseError("field \"correlations\" must be a 2x2 array of numbers");
        c.ab[x] = {row[0].get<double>(), row[1].get<double>()};
    }
    return c;
}

std::string report_to_json(const MembershipReport& r) {
    json j;
    j["ns_valid"] = r.ns_valid;
    auto opt = [](const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); };
    j["local"] = opt(r.local);
    j["npa1"] = opt(r.npa1);
    j["qtilde"] = opt(r.qtilde);
    json slacks = json::object();
    for (const auto& [name, value] : r.slacks) slacks[name] = finite_or_null(value);
    j["slacks"] = slacks;
    j["inconsistent"] = r.inconsistent;
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back({{"constraint", v.constraint}, {"residual", v.residual}});
    j["violations"] = violations;
    return j.dump(2);
}

std::string inflection_to_json(const InflectionEstimate& e) {
    json j;
    j["s_star"] = e.s_star;
    j["uncertainty"] = e.uncertainty;
    j["transition_lo"] = e.transition_lo;
    j["transition_hi"] = e.transition_hi;
    return j.dump(2);
}

std::string kinks_to_json(const std::vector<Kink>& kinks) {
    json j = json::array();
    for (const auto& k : kinks) j.push_back({{"s", k.s}, {"strength", k.strength}, {"series", k.series}});
    return j.dump(2);
}

void write_curve_csv(std::ostream& out, const BoundaryCurve& curve) {
    out << kCurveHeader << '\n';
    for (const auto& p : curve.points) {
        out << format_double(p.s) << ',' << format_double(p.i) << ',' << (p.converged ? 1 : 0);
        for (double v : p.argopt.flat()) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_curve_csv(const std::filesystem::path& path, const BoundaryCurve& curve) {
    std::ostringstream os;
    write_curve_csv(os, curve);
    write_text_file(path, os.str());
}

BoundaryCurve read_curve_csv(std::istream& in) {
    BoundaryCurve curve;
    std::string line;
    std::size_t number = 0;
    bool header = false;
    static const auto columns = split(kCurveHeader, ',');
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != kCurveHeader) throw ParseError("expected header '" + std::string(kCurveHeader) + "'", number);
            header = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != columns.size()) {
            throw ParseError("expected " + std::to_string(columns.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             number);
        }
        CurvePoint p;
        p.s = parse_field(fields[0], number, columns[0]);
        p.i = parse_field(fields[1], number, columns[1]);
        if (fields[2] != "0" && fields[2] != "1") throw ParseError("column converged must be 0 or 1", number);
        p.converged = fields[2] == "1";
        std::array<double, 8> flat{};
        for (std::size_t k = 0; k < 8; ++k) flat[k] = parse_field(fields[3 + k], number, columns[3 + k]);
        p.argopt = Correlators::from_flat(flat);
        if (!std::isfinite(p.s)) throw ParseError("column s must be finite", number);
        if (!curve.points.empty() && !(p.s > curve.points.back().s))
            throw ParseError("s column must increase strictly", number);
        curve.points.push_back(p);
    }
    if (!header) throw ParseError("empty curve file", 1);
    if (!curve.points.empty()) {
        curve.config.s_lo = curve.points.front().s;
        curve.config.s_hi = curve.points.back().s;
        curve.config.grid_points = static_cast<int>(curve.points.size());
    }
    return curve;
}

BoundaryCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_curve_csv(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    out << kTrajectoryHeader << '\n';
    for (std::size_t k = 0; k < t.s.size(); ++k) {
        out << format_double(t.s[k]);
        for (int q = 0; q < 5; ++q) out << ',' << format_double(t.series(q)[k]);
        out << '\n';
    }
}

void write_sample_csv(std::ostream& out, std::span<const Behavior> behaviors, bool full) {
    out << (full ? "s,i,a0,a1,b0,b1,c00,c01,c10,c11" : "s,i") << '\n';
    for (const auto& p : behaviors) {
        const auto fp = functional_point(p);
        out << format_double(fp.s) << ',' << format_double(fp.i);
        if (full)
            for (double v : p.correlators().flat()) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int k = 0; k < length; ++k) os << std::setw(2) << static_cast<int>(digest[k]);
    return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sha256_hex(buffer.str());
}

void RunManifest::add_output(const std::filesystem::path& path) {
    checksums[path.filename().string()] = sha256_file(path);
}

std::string RunManifest::to_json() const {
    json j;
    j["command_line"] = command_line;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_time_s"] = wall_time;
    j["checksums"] = checksums;
    return j.dump(2);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    return std::filesystem::path(output.string() + ".manifest.json");
}

}  // namespace nonsig
