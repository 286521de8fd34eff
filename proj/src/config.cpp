#include "fracsde/config.hpp"

#include <fstream>
#include <limits>

namespace fracsde {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& key, const char* expected) {
    throw Error(Errc::malformed_value, "config key '" + key + "' expects " + expected);
}

std::string read_string(const json& value, const std::string& key) {
    if (!value.is_string()) malformed(key, "a string");
    return value.get<std::string>();
}

double read_number(const json& value, const std::string& key) {
    if (!value.is_number()) malformed(key, "a number");
    return value.get<double>();
}

std::int64_t read_integer(const json& value, const std::string& key) {
    if (!value.is_number_integer()) malformed(key, "an integer");
    return value.get<std::int64_t>();
}

int read_int(const json& value, const std::string& key) {
    const std::int64_t v = read_integer(value, key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        malformed(key, "an integer in int range");
    return static_cast<int>(v);
}

std::uint64_t read_seed(const json& value, const std::string& key) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    malformed(key, "a non-negative integer");
}

std::vector<double> read_number_list(const json& value, const std::string& key) {
    if (!value.is_array() || value.empty()) malformed(key, "a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& item : value) out.push_back(read_number(item, key));
    return out;
}

std::vector<std::int64_t> read_integer_list(const json& value, const std::string& key) {
    if (!value.is_array() || value.empty()) malformed(key, "a non-empty array of integers");
    std::vector<std::int64_t> out;
    out.reserve(value.size());
    for (const auto& item : value) out.push_back(read_integer(item, key));
    return out;
}

}  // namespace

void apply_config_file(RunConfiguration& config, const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw Error(Errc::io_failure, "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(stream);
    } catch (const json::parse_error& e) {
        throw Error(Errc::malformed_value,
                    "config file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw Error(Errc::malformed_value, "config file must hold a flat JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "problem") {
            config.problem = read_string(value, key);
        } else if (key == "alphas") {
            config.alphas = read_number_list(value, key);
        } else if (key == "n") {
            config.n = read_integer_list(value, key);
        } else if (key == "paths") {
            config.paths = read_integer(value, key);
        } else if (key == "seed") {
            config.seed = read_seed(value, key);
        } else if (key == "method") {
            config.method = read_string(value, key);
        } else if (key == "soe_eps") {
            config.soe_eps = read_number(value, key);
        } else if (key == "out_dir") {
            config.out_dir = read_string(value, key);
        } else if (key == "workers") {
            config.workers = read_int(value, key);
        } else if (key == "repeat") {
            config.repeat = read_int(value, key);
        } else {
            throw Error(Errc::unknown_flag, "unknown config key '" + key + "'");
        }
    }
}

void validate_run_configuration(const RunConfiguration& config) {
    if (config.method != "direct" && config.method != "fast" && config.method != "both")
        throw Error(Errc::malformed_value,
                    "method must be direct, fast, or both; got '" + config.method + "'");
    const bool wants_fast = config.method != "direct";
    if (wants_fast && (!(config.soe_eps > 0.0) || config.soe_eps >= 1.0))
        throw Error(Errc::conflicting_options,
                    "method '" + config.method +
                        "' needs the exponential-sum surrogate, but soe_eps = " +
                        std::to_string(config.soe_eps) + " is outside (0, 1)");
}

nlohmann::ordered_json echo_config(const RunConfiguration& config) {
    nlohmann::ordered_json echo;
    echo["problem"] = config.problem;
    echo["alphas"] = config.alphas;
    echo["n"] = config.n;
    echo["paths"] = config.paths;
    echo["seed"] = config.seed;
    echo["method"] = config.method;
    echo["soe_eps"] = config.soe_eps;
    echo["out_dir"] = config.out_dir;
    echo["workers"] = config.workers;
    echo["repeat"] = config.repeat;
    return echo;
}

StudyConfig to_study_config(const RunConfiguration& config) {
    validate_run_configuration(config);
    StudyConfig study;
    study.problem_id = config.problem;
    study.alphas = config.alphas;
    study.resolutions = config.n;
    study.path_count = config.paths;
    study.base_seed = config.seed;
    study.run_direct = config.method != "fast";
    study.run_fast = config.method != "direct";
    study.soe_epsilon = config.soe_eps;
    study.workers = config.workers;
    study.timing_repeats = config.repeat;
    study.validate();
    return study;
}

}  // namespace fracsde
