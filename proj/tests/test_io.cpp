#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nonsig/errors.hpp"
#include "nonsig/io.hpp"

using namespace nonsig;
namespace fs = std::filesystem;

namespace {

BoundaryCurve small_curve() {
    BoundaryCurve curve;
    curve.config.set = SetKind::NS;
    for (int k = 0; k < 5; ++k) {
        CurvePoint p;
        p.s = 2.0 + 0.25 * k;
        p.i = 0.1 * k + 1.0 / 3.0;
        p.converged = k != 3;
        p.argopt.a = {0.1 * k, -0.2};
        p.argopt.b = {1.0 / 7.0, 0.0};
        p.argopt.ab = {{{p.s / 4.0, p.s / 4.0}, {p.s / 4.0, -p.s / 4.0}}};
        curve.points.push_back(p);
    }
    return curve;
}

void expect_parse_error_at(const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
        read_curve_csv(in);
        FAIL() << "no error for:\n" << text;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
    }
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "nonsig_test_io";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(FormatDouble, RoundTripsAndSpecialValues) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 2.0 * std::sqrt(2.0)}) EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.5, 12), "0.5");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(CurveCsv, RoundTripIsExact) {
    const auto curve = small_curve();
    std::ostringstream out;
    write_curve_csv(out, curve);
    EXPECT_EQ(out.str().substr(0, kCurveHeader.size()), kCurveHeader);
    std::istringstream in(out.str());
    const auto back = read_curve_csv(in);
    ASSERT_EQ(back.points.size(), curve.points.size());
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        EXPECT_EQ(back.points[k].s, curve.points[k].s);
        EXPECT_EQ(back.points[k].i, curve.points[k].i);
        EXPECT_EQ(back.points[k].converged, curve.points[k].converged);
        EXPECT_EQ(back.points[k].argopt, curve.points[k].argopt);
    }
    EXPECT_EQ(back.config.grid_points, 5);
    EXPECT_DOUBLE_EQ(back.config.s_lo, 2.0);
    EXPECT_DOUBLE_EQ(back.config.s_hi, 3.0);
}

TEST(CurveCsv, FileRoundTrip) {
    const auto path = scratch_dir() / "sub" / "curve.csv";
    fs::remove_all(path.parent_path());
    write_curve_csv(path, small_curve());
    EXPECT_EQ(read_curve_csv(path).points.size(), 5u);
    EXPECT_THROW(read_curve_csv(scratch_dir() / "missing.csv"), ParseError);
}

TEST(CurveCsv, ErrorsCarryLineNumbers) {
    const std::string header = std::string(kCurveHeader) + "\n";
    const std::string row1 = "2,0.1,1,0,0,0,0,0.5,0.5,0.5,-0.5\n";
    expect_parse_error_at("", 1);
    expect_parse_error_at("s,i\n", 1);
    expect_parse_error_at(header + row1 + "2.5,0.1,1,0,0\n", 3);
    expect_parse_error_at(header + row1 + "2.5,abc,1,0,0,0,0,0.5,0.5,0.5,-0.5\n", 3);
    expect_parse_error_at(header + row1 + "2.5,0.1,2,0,0,0,0,0.5,0.5,0.5,-0.5\n", 3);
    expect_parse_error_at(header + row1 + row1, 3);
    expect_parse_error_at(header + row1 + "1.5,0.1,1,0,0,0,0,0.5,0.5,0.5,-0.5\n", 3);
}

TEST(CorrelatorsJson, RoundTrip) {
    Correlators c;
    c.a = {0.1, -0.3};
    c.b = {1.0 / 3.0, 0.0};
    c.ab = {{{0.5, 0.25}, {-0.125, 1.0}}};
    EXPECT_EQ(correlators_from_json(correlators_to_json(c)), c);
}

TEST(CorrelatorsJson, MalformedInput) {
    EXPECT_THROW(correlators_from_json("{"), ParseError);
    EXPECT_THROW(correlators_from_json("[1,2]"), ParseError);
    EXPECT_THROW(correlators_from_json(R"({"marginals_a":[0,0],"marginals_b":[0,0]})"), ParseError);
    EXPECT_THROW(correlators_from_json(R"({"marginals_a":[0],"marginals_b":[0,0],"correlations":[[0,0],[0,0]]})"),
                 ParseError);
    EXPECT_THROW(
        correlators_from_json(R"({"marginals_a":[0,0],"marginals_b":[0,0],"correlations":[[0,"x"],[0,0]]})"),
        ParseError);
}

TEST(ReportJson, InfiniteSlackIsNull) {
    MembershipReport r;
    r.ns_valid = true;
    r.local = true;
    r.slacks["local"] = std::numeric_limits<double>::infinity();
    r.slacks["npa1"] = 0.25;
    const auto j = nlohmann::json::parse(report_to_json(r));
    EXPECT_TRUE(j["slacks"]["local"].is_null());
    EXPECT_DOUBLE_EQ(j["slacks"]["npa1"].get<double>(), 0.25);
    EXPECT_TRUE(j["npa1"].is_null());
    EXPECT_EQ(j["local"], true);
}

TEST(AnalysisJson, Fields) {
    InflectionEstimate e{2.83, 0.03, 2.80, 2.83};
    const auto j = nlohmann::json::parse(inflection_to_json(e));
    EXPECT_DOUBLE_EQ(j["s_star"].get<double>(), 2.83);
    EXPECT_DOUBLE_EQ(j["uncertainty"].get<double>(), 0.03);
    const auto k = nlohmann::json::parse(kinks_to_json({Kink{2.8, 40.0, {"a0", "c11"}}}));
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0]["series"].size(), 2u);
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const auto path = scratch_dir() / "abc.txt";
    write_text_file(path, "abc");
    EXPECT_EQ(sha256_file(path), sha256_hex("abc"));
}

TEST(Manifest, RecordsChecksums) {
    const auto path = scratch_dir() / "out.csv";
    write_text_file(path, "s,i\n0,0\n");
    RunManifest m;
    m.command_line = "nonsig curve";
    m.seed = 7;
    m.wall_time = 0.5;
    m.add_output(path);
    const auto j = nlohmann::json::parse(m.to_json());
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["version"], library_version());
    EXPECT_EQ(j["checksums"]["out.csv"], sha256_hex("s,i\n0,0\n"));
    EXPECT_EQ(manifest_path_for(path).filename(), "out.csv.manifest.json");
}
