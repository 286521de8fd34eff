#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracsde/mc.hpp"

namespace fracsde {

/// One flat bag of run settings shared by the command line, the environment,
/// and JSON config files; the field initializers are the documented defaults.
struct RunConfiguration {
    std::string problem = "example1";
    std::vector<double> alphas = {0.1, 0.2};
    std::vector<std::int64_t> n = {128, 256};
    std::int64_t paths = 200;
    std::uint64_t seed = 1;
    std::string method = "both";  // direct | fast | both
    double soe_eps = 1e-10;
    std::string out_dir = ".";
    int workers = 1;
    int repeat = 3;
};

/// Overlays `path` (a flat JSON object) onto `config`.  Unknown keys and
/// wrong-typed values are rejected, not ignored.
void apply_config_file(RunConfiguration& config, const std::filesystem::path& path);

/// Cross-field checks that individual setters cannot see.
void validate_run_configuration(const RunConfiguration& config);

/// The exact file keys, echoed back; feeding the result to apply_config_file
/// reproduces the same configuration.
nlohmann::ordered_json echo_config(const RunConfiguration& config);

StudyConfig to_study_config(const RunConfiguration& config);

}  // namespace fracsde
