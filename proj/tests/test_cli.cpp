#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fracsde/config.hpp"

using namespace fracsde;
namespace fs = std::filesystem;

namespace {

fs::path write_temp_config(const std::string& body) {
    static int counter = 0;
    const fs::path path =
        fs::temp_directory_path() / ("fracsde_cfg_" + std::to_string(counter++) + ".json");
    std::ofstream stream(path, std::ios::trunc);
    stream << body;
    return path;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::bad_config;
}

}  // namespace

TEST_CASE("documented defaults") {
    const RunConfiguration d;
    CHECK(d.problem == "example1");
    CHECK(d.alphas == std::vector<double>{0.1, 0.2});
    CHECK(d.n == std::vector<std::int64_t>{128, 256});
    CHECK(d.paths == 200);
    CHECK(d.seed == 1);
    CHECK(d.method == "both");
    CHECK(d.soe_eps == 1e-10);
    CHECK(d.out_dir == ".");
    CHECK(d.workers == 1);
    CHECK(d.repeat == 3);
}

TEST_CASE("config file overlays every key") {
    const auto path = write_temp_config(R"({
        "problem": "example2",
        "alphas": [0.1, 0.5, 0.85],
        "n": [64, 128, 256],
        "paths": 50,
        "seed": 9000,
        "method": "fast",
        "soe_eps": 1e-8,
        "out_dir": "/tmp/somewhere",
        "workers": 4,
        "repeat": 0
    })");
    RunConfiguration config;
    apply_config_file(config, path);
    CHECK(config.problem == "example2");
    CHECK(config.alphas == std::vector<double>{0.1, 0.5, 0.85});
    CHECK(config.n == std::vector<std::int64_t>{64, 128, 256});
    CHECK(config.paths == 50);
    CHECK(config.seed == 9000);
    CHECK(config.method == "fast");
    CHECK(config.soe_eps == 1e-8);
    CHECK(config.out_dir == "/tmp/somewhere");
    CHECK(config.workers == 4);
    CHECK(config.repeat == 0);
    fs::remove(path);
}

TEST_CASE("partial config files keep the defaults elsewhere") {
    const auto path = write_temp_config(R"({"paths": 500})");
    RunConfiguration config;
    apply_config_file(config, path);
    CHECK(config.paths == 500);
    CHECK(config.problem == "example1");
    CHECK(config.method == "both");
    fs::remove(path);
}

TEST_CASE("unknown keys are rejected, not ignored") {
    const auto path = write_temp_config(R"({"paths": 500, "speling": 1})");
    RunConfiguration config;
    CHECK(code_of([&] { apply_config_file(config, path); }) == Errc::unknown_flag);
    fs::remove(path);
}

TEST_CASE("malformed values are rejected") {
    RunConfiguration config;
    for (const char* body : {
             R"({"paths": "many"})",       // string where integer expected
             R"({"alphas": 0.5})",         // scalar where array expected
             R"({"alphas": []})",          // empty array
             R"({"n": [128.5]})",          // fractional resolution
             R"({"seed": -1})",            // negative seed
             R"({"method": 3})",           // number where string expected
             R"({"workers": 98765432109876543210})",  // far outside int range
             R"([1, 2, 3])",               // not an object
             R"(not json at all)",         // unparseable
         }) {
        const auto path = write_temp_config(body);
        CHECK(code_of([&] { apply_config_file(config, path); }) == Errc::malformed_value);
        fs::remove(path);
    }
}

TEST_CASE("missing config file is an io failure") {
    RunConfiguration config;
    CHECK(code_of([&] {
              apply_config_file(config, "/nonexistent/fracsde.json");
          }) == Errc::io_failure);
}

TEST_CASE("echoed configuration round-trips through a file") {
    RunConfiguration original;
    original.problem = "example2";
    original.alphas = {0.3, 0.35, 0.4};
    original.n = {128, 256, 512};
    original.paths = 777;
    original.seed = 123456789;
    original.method = "direct";
    original.soe_eps = 2.5e-9;
    original.out_dir = "/tmp/x";
    original.workers = 8;
    original.repeat = 0;

    const auto path = write_temp_config(echo_config(original).dump(2));
    RunConfiguration loaded;
    apply_config_file(loaded, path);
    CHECK(loaded.problem == original.problem);
    CHECK(loaded.alphas == original.alphas);
    CHECK(loaded.n == original.n);
    CHECK(loaded.paths == original.paths);
    CHECK(loaded.seed == original.seed);
    CHECK(loaded.method == original.method);
    CHECK(loaded.soe_eps == original.soe_eps);
    CHECK(loaded.out_dir == original.out_dir);
    CHECK(loaded.workers == original.workers);
    CHECK(loaded.repeat == original.repeat);
    fs::remove(path);
}

TEST_CASE("method and tolerance cross-checks") {
    RunConfiguration config;
    config.method = "sideways";
    CHECK(code_of([&] { validate_run_configuration(config); }) == Errc::malformed_value);

    config.method = "fast";
    config.soe_eps = 0.0;
    CHECK(code_of([&] { validate_run_configuration(config); }) ==
          Errc::conflicting_options);
    config.method = "both";
    config.soe_eps = -1e-9;
    CHECK(code_of([&] { validate_run_configuration(config); }) ==
          Errc::conflicting_options);

    // the direct stepper never touches the surrogate, so the pair is benign
    config.method = "direct";
    CHECK_NOTHROW(validate_run_configuration(config));

    config.method = "fast";
    config.soe_eps = 1e-9;
    CHECK_NOTHROW(validate_run_configuration(config));
}

TEST_CASE("study conversion maps methods and copies fields") {
    RunConfiguration config;
    config.problem = "example2";
    config.alphas = {0.1, 0.5, 0.85};
    config.n = {64, 128};
    config.paths = 10;
    config.seed = 5;
    config.workers = 2;
    config.repeat = 0;

    config.method = "direct";
    auto study = to_study_config(config);
    CHECK(study.run_direct);
    CHECK(!study.run_fast);

    config.method = "fast";
    study = to_study_config(config);
    CHECK(!study.run_direct);
    CHECK(study.run_fast);

    config.method = "both";
    study = to_study_config(config);
    CHECK(study.run_direct);
    CHECK(study.run_fast);
    CHECK(study.problem_id == "example2");
    CHECK(study.alphas == config.alphas);
    CHECK(study.resolutions == config.n);
    CHECK(study.path_count == 10);
    CHECK(study.base_seed == 5);
    CHECK(study.workers == 2);
    CHECK(study.timing_repeats == 0);
}

TEST_CASE("study conversion surfaces order validation errors") {
    RunConfiguration config;
    config.alphas = {0.8, 0.6};  // not increasing
    CHECK(code_of([&] { to_study_config(config); }) ==
          Errc::orders_not_strictly_increasing);

    config.alphas = {0.5, 1.2};
    CHECK(code_of([&] { to_study_config(config); }) == Errc::order_out_of_range);

    config.alphas = {0.1, 0.2};
    config.n = {128, 192};  // 192 not a multiple of 128
    CHECK(code_of([&] { to_study_config(config); }) == Errc::bad_config);
}
