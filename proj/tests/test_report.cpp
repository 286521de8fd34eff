#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fracsde/report.hpp"

using namespace fracsde;
namespace fs = std::filesystem;

namespace {

ConvergenceReport sample_report(bool with_direct, bool with_fast, bool with_timing) {
    ConvergenceReport report;
    report.config.problem_id = "example1";
    report.config.alphas = {0.1, 0.2};
    report.config.base_seed = 42;
    report.rng_id = "test-rng";
    report.kernel_backend = "scalar";
    report.timestamp = "2026-08-19T00:00:00Z";
    report.resolutions = {128, 256};
    MethodSeries series;
    series.errors = {1.25e-3, 8.5e-4};
    series.errors_se = {4e-5, 3e-5};
    series.orders = {0.5573480526};
    series.final_sqnorm_mean = {0.0017, 0.0017};
    if (with_timing) series.cpu_seconds = {0.125, 0.5};
    if (with_direct) report.direct = series;
    if (with_fast) {
        series.cpu_seconds.clear();
        if (with_timing) series.cpu_seconds = {0.03125, 0.0625};
        report.fast = series;
    }
    return report;
}

std::string slurp(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    REQUIRE(stream);
    return {std::istreambuf_iterator<char>(stream), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("csv layout is frozen") {
    const auto report = sample_report(true, true, true);
    CHECK(render_csv(report) ==
          "n,error,order,cpu_direct_s,cpu_fast_s\n"
          "128,1.250000000000e-03,,0.125000,0.031250\n"
          "256,8.500000000000e-04,0.557348,0.500000,0.062500\n");
}

TEST_CASE("csv without timing leaves the cpu cells empty") {
    const auto report = sample_report(true, true, false);
    CHECK(render_csv(report) ==
          "n,error,order,cpu_direct_s,cpu_fast_s\n"
          "128,1.250000000000e-03,,,\n"
          "256,8.500000000000e-04,0.557348,,\n");
}

TEST_CASE("csv error column falls back to the fast series") {
    auto report = sample_report(false, true, true);
    report.fast->errors = {2e-3, 1e-3};
    report.fast->orders = {1.0};
    const std::string csv = render_csv(report);
    CHECK(csv ==
          "n,error,order,cpu_direct_s,cpu_fast_s\n"
          "128,2.000000000000e-03,,,0.031250\n"
          "256,1.000000000000e-03,1.000000,,0.062500\n");
}

TEST_CASE("json report structure") {
    const auto report = sample_report(true, false, false);
    nlohmann::ordered_json echo;
    echo["problem"] = "example1";
    echo["seed"] = 42;
    const auto j = render_json(report, echo);
    CHECK(j["schema"] == "fracsde-report-v1");
    CHECK(j["timestamp"] == "2026-08-19T00:00:00Z");
    CHECK(j["rng"] == "test-rng");
    CHECK(j["kernel_backend"] == "scalar");
    CHECK(j["config"]["problem"] == "example1");
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["resolutions"] == nlohmann::ordered_json({128, 256}));
    CHECK(j["results"].contains("direct"));
    CHECK(!j["results"].contains("fast"));
    CHECK(j["results"]["direct"]["errors"][0] == 1.25e-3);
    CHECK(j["results"]["direct"]["errors_se"][1] == 3e-5);
    CHECK(j["results"]["direct"]["orders"].size() == 1);
    CHECK(j["results"]["direct"]["final_sqnorm_mean"].size() == 2);
}

TEST_CASE("gnuplot data lists h against error") {
    const auto report = sample_report(true, false, false);
    CHECK(render_gnuplot_data(report, *report.direct) ==
          "# h error\n"
          "7.812500000000e-03 1.250000000000e-03\n"
          "3.906250000000e-03 8.500000000000e-04\n");
}

TEST_CASE("atomic write lands content and leaves no temporaries") {
    const fs::path dir = fs::temp_directory_path() / "fracsde_report_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path target = dir / "out.txt";
    write_text_atomic(target, "payload\n");
    CHECK(slurp(target) == "payload\n");
    write_text_atomic(target, "replaced\n");
    CHECK(slurp(target) == "replaced\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("atomic write failure leaves no partial file") {
    const fs::path dir = fs::temp_directory_path() / "fracsde_report_missing";
    fs::remove_all(dir);  // directory does not exist
    const fs::path target = dir / "out.txt";
    CHECK_THROWS_AS(write_text_atomic(target, "payload\n"), Error);
    CHECK(!fs::exists(target));
    try {
        write_text_atomic(target, "payload\n");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::io_failure);
    }
}

TEST_CASE("report file set matches the methods present") {
    const fs::path dir = fs::temp_directory_path() / "fracsde_report_files";
    fs::remove_all(dir);
    fs::create_directories(dir);
    nlohmann::ordered_json echo;
    echo["problem"] = "example1";

    const auto both = write_report_files(sample_report(true, true, true), echo, dir);
    CHECK(both.size() == 5);  // json, csv, two dat files, plt
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "error_vs_h_direct.dat"));
    CHECK(fs::exists(dir / "error_vs_h_fast.dat"));
    CHECK(fs::exists(dir / "error_vs_h.plt"));

    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto lone = write_report_files(sample_report(true, false, false), echo, dir);
    CHECK(lone.size() == 4);
    CHECK(!fs::exists(dir / "error_vs_h_fast.dat"));
    const std::string json_text = slurp(dir / "report.json");
    CHECK(json_text.find("fracsde-report-v1") != std::string::npos);
    fs::remove_all(dir);
}
