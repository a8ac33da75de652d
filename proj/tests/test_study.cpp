#include "misp/study.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace misp;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("study configuration validation")
{
    StudyConfig cfg;
    cfg.element = "misp3";
    cfg.mesh = "trapezoid";
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.element = "misp4";
    cfg.mesh = "uniform-tri";
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.mesh = "uniform-quad";
    CHECK_NOTHROW(validate(cfg));

    cfg.checks = {"rh", "bogus"};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.checks = {};
    cfg.element = "nope";
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("table emission")
{
    StudyConfig cfg;
    cfg.ns = {2, 4};
    cfg.ts = {1.0};

    const StudyResult result = run_study_in_memory(cfg);
    REQUIRE(result.series.size() == 1);
    REQUIRE(result.series[0].rows.size() == 2);

    SECTION("csv layout")
    {
        const std::string csv = emit_csv(cfg, result);
        CHECK(csv.rfind("element,mesh,t,n,h,err_w_h1,err_beta_h1,err_M_l2,err_gamma_l2,"
                        "err_gamma_weighted\n", 0) == 0);
        CHECK(csv.find("misp3,uniform-tri,1,2,0.5,") != std::string::npos);
        CHECK(csv.find("# rates\n") != std::string::npos);
        CHECK(csv.find(",w_h1,") != std::string::npos);
    }

    SECTION("markdown layout and rounding")
    {
        const std::string md = emit_markdown(cfg, result);
        CHECK(md.find("## t = 1") != std::string::npos);
        CHECK(md.find("| 2x2 | 4x4 | rate |") != std::string::npos);
        CHECK(md.find("|w-w_h|_1") != std::string::npos);
        CHECK(detail::fmt4(0.320512) == "0.3205");
    }

    SECTION("empty report is rejected")
    {
        const StudyResult empty;
        CHECK_THROWS_AS(emit_csv(cfg, empty), std::invalid_argument);
        CHECK_THROWS_AS(emit_markdown(cfg, empty), std::invalid_argument);
    }

    SECTION("single-cell report has no rates block entries")
    {
        StudyConfig one = cfg;
        one.ns = {2};
        const StudyResult r = run_study_in_memory(one);
        const std::string csv = emit_csv(one, r);
        // header + one data line + rates header, nothing after
        CHECK(csv.find(",w_h1,") == std::string::npos);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    }
}

TEST_CASE("study runs are byte-identical")
{
    StudyConfig cfg;
    cfg.ns = {2, 4};
    cfg.ts = {0.1, 1e-8};
    cfg.checks = {"rh"};
    const auto dir = std::filesystem::temp_directory_path() / "misp_study_test";
    std::filesystem::create_directories(dir);
    cfg.out_dir = dir.string();
    cfg.dump_meshes = true;

    const StudyResult r1 = run_study(cfg);
    const std::string csv1 = slurp(dir / "misp3-uniform-tri.csv");
    const std::string md1 = slurp(dir / "misp3-uniform-tri.md");
    const StudyResult r2 = run_study(cfg);
    const std::string csv2 = slurp(dir / "misp3-uniform-tri.csv");

    CHECK(csv1 == csv2);
    CHECK(csv1.find("element,mesh,") == 0);
    CHECK(!md1.empty());
    CHECK(r1.checks_passed);
    CHECK(r2.checks_passed);
    CHECK(r1.load_discrepancy <= 1e-12);
    CHECK(std::filesystem::exists(dir / "mesh-uniform-tri-n2.txt"));

    std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable output path is reported")
{
    StudyConfig cfg;
    cfg.ns = {2};
    cfg.ts = {1.0};
    cfg.out_dir = "/nonexistent-misp-dir/sub";
    CHECK_THROWS_AS(run_study(cfg), std::runtime_error);
}
