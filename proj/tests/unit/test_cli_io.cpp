#include "dnoband/config.hpp"
#include "dnoband/errors.hpp"
#include "dnoband/experiments.hpp"
#include "dnoband/report.hpp"
#include "dnoband/writers.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

using namespace dnoband;
namespace fs = std::filesystem;

namespace {

const char* small_config = R"({
  "bathymetry": {"cosine_series": [[2, 2.0, 0.0]]},
  "epsilon_list": [0.02],
  "grid": {"n_x": 24, "n_z": 16},
  "theta_grid": {"count": 9},
  "n_bands": 4
})";

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("dnoband_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("DNOBAND_CLI");
    if (!cli) return -1;
    const std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

BandStructure tiny_bands() {
    BandStructure b;
    b.theta_grid = ThetaGrid::uniform(9);
    b.epsilon = 0.02;
    for (int n = 0; n < 3; ++n) {
        std::vector<double> row;
        for (double t : b.theta_grid.values()) row.push_back(n + t / 3.0 + 1e-17 * n);
        b.bands.push_back(row);
    }
    return b;
}

} // namespace

TEST(Config, Defaults) {
    const auto c = parse_config(R"({"bathymetry": {"cosine_series": [[2, 2.0, 0.0]]}, "epsilon_list": [0.02]})");
    EXPECT_EQ(c.grid.n_x, 64);
    EXPECT_EQ(c.grid.n_z, 32);
    EXPECT_EQ(c.theta_count, 65);
    EXPECT_EQ(c.n_bands, 8);
    ASSERT_EQ(c.gap_pairs.size(), 1u);
    EXPECT_EQ(c.gap_pairs[0].p, 1);
    EXPECT_TRUE(c.order1);
    EXPECT_TRUE(c.order2);
    EXPECT_EQ(c.profile.fourier_coefficient(2), cplx(1.0));
}

TEST(Config, FourierAndObjectForms) {
    const auto c = parse_config(R"({
      "bathymetry": {"fourier": [[1, 0.5, -0.25], {"k": 3, "re": 1.0}]},
      "epsilon_list": [0.01, 0.02],
      "gap_pairs": [1, {"p": 0, "location": 0.5}],
      "theta_grid": {"kind": "chebyshev", "count": 17},
      "predictors": {"order2": false}
    })");
    EXPECT_EQ(c.profile.fourier_coefficient(1), cplx(0.5, -0.25));
    EXPECT_EQ(c.profile.fourier_coefficient(3), cplx(1.0));
    ASSERT_EQ(c.gap_pairs.size(), 2u);
    EXPECT_EQ(c.gap_pairs[1].location, GapLocation::half);
    EXPECT_FALSE(c.order2);
    EXPECT_EQ(c.theta_grid().size(), 17u);
}

TEST(Config, StrictRejections) {
    const std::string ok_b = R"("bathymetry": {"cosine_series": [[2, 2.0, 0.0]]})";
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": [0.02], "colour": 1})"), ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": [0.02], "grid": {"nx": 64}})"), ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": "0.02"})"), ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": [0.02], "schema_version": 2})"), ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": [0.02], "gap_pairs": [{"p": 1, "location": 0.25}]})"),
                 ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + R"(, "epsilon_list": [0.02], "grid": {"n_x": 7}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"epsilon_list": [0.02]})"), ConfigError);
    EXPECT_THROW(parse_config("{" + ok_b + ", "), ConfigError);
}

TEST(Config, ErrorNamesField) {
    try {
        parse_config(R"({"bathymetry": {"cosine_series": []}, "epsilon_list": [0.1], "n_band": 3})");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("n_band"), std::string::npos);
    }
}

TEST(Config, DomainViolation) {
    EXPECT_THROW(parse_config(R"({"bathymetry": {"cosine_series": [[1, 2.0, 0.0]]}, "epsilon_list": [0.6]})"),
                 DomainError);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(0.0), "0");
    for (double v : {0.1, 1.0 / 3.0, 0.76159415595576489, -2.5e-17, 123456.789})
        EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(BandsCsv, Format) {
    const auto csv = bands_csv(tiny_bands());
    EXPECT_EQ(csv.rfind("theta,lambda_0,lambda_1,lambda_2\n", 0), 0u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.back(), '\n');
}

TEST(BandsCsv, RoundTripIsExact) {
    const auto b = tiny_bands();
    const auto p = parse_bands_csv(bands_csv(b));
    EXPECT_EQ(p.theta, b.theta_grid.values());
    EXPECT_EQ(p.bands, b.bands);
}

TEST(BandsCsv, RejectsMalformed) {
    EXPECT_THROW(parse_bands_csv("x,lambda_0\n0,1\n"), Error);
    EXPECT_THROW(parse_bands_csv("theta,lambda_0\n0,1,2\n"), Error);
    EXPECT_THROW(parse_bands_csv("theta,lambda_0\n0,abc\n"), Error);
}

TEST(BandsSvg, WellFormedAndDeterministic) {
    const auto s = bands_svg(tiny_bands());
    EXPECT_NE(s.find("<svg"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
    EXPECT_EQ(s, bands_svg(tiny_bands()));
}

TEST(GapReport, RoundTrip) {
    GapReportDocument doc;
    doc.profile = "2:1:0";
    GapReportEntry e;
    e.p = 1;
    e.epsilon = 0.02;
    e.measured.width = 0.0168;
    e.measured.n_lower = 1;
    GapPrediction pr;
    pr.p = 1;
    pr.half_width = 0.0084;
    e.predicted = pr;
    e.deviation = gap_deviation(e.measured, pr);
    e.pass = true;
    doc.entries.push_back(e);
    GapReportEntry bare;
    bare.p = 2;
    doc.entries.push_back(bare);

    const auto text = to_json(doc);
    const auto back = parse_gap_report(text);
    EXPECT_EQ(to_json(back), text);
    ASSERT_EQ(back.entries.size(), 2u);
    EXPECT_FALSE(back.entries[1].predicted.has_value());
    EXPECT_TRUE(back.all_passed());
}

TEST(GapReport, Strict) {
    GapReportDocument doc;
    auto text = to_json(doc);
    EXPECT_NO_THROW(parse_gap_report(text));
    auto bad = text;
    bad.replace(bad.find('{'), 1, R"({"extra": 1,)");
    EXPECT_THROW(parse_gap_report(bad), ConfigError);
    auto ver = text;
    ver.replace(ver.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
    EXPECT_THROW(parse_gap_report(ver), ConfigError);
}

TEST(GapDeviationTest, Relative) {
    GapRecord m;
    m.width = 0.9;
    m.center = 1.0;
    GapPrediction p;
    p.half_width = 0.5;
    p.center = 1.1;
    const auto d = gap_deviation(m, p);
    EXPECT_NEAR(d.width_abs, 0.1, 1e-15);
    EXPECT_NEAR(d.width_rel, 0.1, 1e-15);
    EXPECT_NEAR(d.center_abs, 0.1, 1e-15);
    EXPECT_EQ(gap_deviation(GapRecord{}, GapPrediction{}).width_rel, 0.0);
}

TEST(Experiments, BandsFilesDeterministic) {
    auto cfg = parse_config(small_config);
    cfg.outputs = scratch("det1");
    cfg.thread_count = 1;
    const auto a = run_bands(cfg);
    cfg.outputs = scratch("det3");
    cfg.thread_count = 3;
    const auto b = run_bands(cfg);
    ASSERT_EQ(a.size(), 2u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].filename(), b[i].filename());
        EXPECT_EQ(read_file(a[i]), read_file(b[i]));
    }
    EXPECT_EQ(a[0].stem().string(), band_file_stem(0.02));
}

TEST(Experiments, GapsReportWritten) {
    auto cfg = parse_config(small_config);
    cfg.outputs = scratch("gaps");
    const auto doc = run_gaps(cfg);
    ASSERT_EQ(doc.entries.size(), 1u);
    EXPECT_TRUE(doc.entries[0].predicted.has_value());
    EXPECT_TRUE(fs::exists(cfg.outputs / "gap_report.json"));
    EXPECT_NO_THROW(parse_gap_report(read_file(cfg.outputs / "gap_report.json")));
}

TEST(Cli, ExitCodes) {
    if (!std::getenv("DNOBAND_CLI")) GTEST_SKIP() << "DNOBAND_CLI not set";
    const auto dir = scratch("cli");
    write_file(dir / "ok.json", small_config);
    write_file(dir / "bad.json", R"({"bathymetry": {"cosine_series": []}, "epsilon_list": [0.1], "bogus": 1})");
    write_file(dir / "domain.json", R"({"bathymetry": {"cosine_series": [[1, 2.0, 0.0]]}, "epsilon_list": [0.7]})");
    write_file(dir / "tight.json", R"({
      "bathymetry": {"cosine_series": [[2, 2.0, 0.0]]}, "epsilon_list": [0.3],
      "grid": {"n_x": 24, "n_z": 16}, "theta_grid": {"count": 9}, "n_bands": 4, "gap_tolerance": 1e-6})");
    const std::string d = dir.string();
    EXPECT_EQ(run_cli("bands --config " + d + "/ok.json --out " + d + "/o1"), 0);
    EXPECT_TRUE(fs::exists(dir / "o1" / (band_file_stem(0.02) + ".csv")));
    EXPECT_EQ(run_cli("predict --config " + d + "/ok.json --out " + d + "/o2"), 0);
    EXPECT_TRUE(fs::exists(dir / "o2" / "predictions.json"));
    EXPECT_EQ(run_cli("gaps --config " + d + "/ok.json --out " + d + "/o3"), 0);
    EXPECT_EQ(run_cli("gaps --config " + d + "/tight.json --out " + d + "/o4"), 1);
    EXPECT_EQ(run_cli("bands --config " + d + "/bad.json"), 2);
    EXPECT_EQ(run_cli("bands --config " + d + "/domain.json"), 2);
    EXPECT_NE(run_cli("bands --config " + d + "/missing.json"), 0);
    EXPECT_NE(run_cli("frobnicate"), 0);
}

TEST(Cli, ShippedConfigsParse) {
    const char* dir = std::getenv("DNOBAND_CONFIGS");
    if (!dir) GTEST_SKIP() << "DNOBAND_CONFIGS not set";
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") EXPECT_NO_THROW(load_config(e.path())) << e.path();
}
