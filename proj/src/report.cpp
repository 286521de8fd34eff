#include "fracsde/report.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <system_error>

#include "fracsde/catalog.hpp"

namespace fracsde {
namespace {

std::string fixed_sci(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12e", value);
    return buffer;
}

std::string fixed_frac(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

const MethodSeries* error_source(const ConvergenceReport& report) {
    if (report.direct) return &*report.direct;
    if (report.fast) return &*report.fast;
    return nullptr;
}

nlohmann::ordered_json series_json(const MethodSeries& series) {
    nlohmann::ordered_json j;
    j["errors"] = series.errors;
    j["errors_se"] = series.errors_se;
    j["orders"] = series.orders;
    j["cpu_seconds"] = series.cpu_seconds;
    j["final_sqnorm_mean"] = series.final_sqnorm_mean;
    return j;
}

}  // namespace

std::string render_csv(const ConvergenceReport& report) {
    const MethodSeries* source = error_source(report);
    std::string out = "n,error,order,cpu_direct_s,cpu_fast_s\n";
    for (std::size_t r = 0; r < report.resolutions.size(); ++r) {
        out += std::to_string(report.resolutions[r]);
        out += ',';
        if (source && r < source->errors.size()) out += fixed_sci(source->errors[r]);
        out += ',';
        if (source && r >= 1 && r - 1 < source->orders.size())
            out += fixed_frac(source->orders[r - 1]);
        out += ',';
        if (report.direct && r < report.direct->cpu_seconds.size())
            out += fixed_frac(report.direct->cpu_seconds[r]);
        out += ',';
        if (report.fast && r < report.fast->cpu_seconds.size())
            out += fixed_frac(report.fast->cpu_seconds[r]);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json render_json(const ConvergenceReport& report,
                                   const nlohmann::ordered_json& config_echo) {
    nlohmann::ordered_json j;
    j["schema"] = "fracsde-report-v1";
    j["timestamp"] = report.timestamp;
    j["rng"] = report.rng_id;
    j["kernel_backend"] = report.kernel_backend;
    j["config"] = config_echo;
    j["resolutions"] = report.resolutions;
    nlohmann::ordered_json results;
    if (report.direct) results["direct"] = series_json(*report.direct);
    if (report.fast) results["fast"] = series_json(*report.fast);
    j["results"] = std::move(results);
    return j;
}

std::string render_gnuplot_data(const ConvergenceReport& report, const MethodSeries& series) {
    const double horizon = find_problem(report.config.problem_id).problem.horizon;
    std::string out = "# h error\n";
    for (std::size_t r = 0; r < report.resolutions.size(); ++r) {
        out += fixed_sci(horizon / static_cast<double>(report.resolutions[r]));
        out += ' ';
        out += fixed_sci(series.errors[r]);
        out += '\n';
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& target, const std::string& content) {
    std::filesystem::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    const std::filesystem::path temp =
        dir / (target.filename().string() + ".tmp-" + std::to_string(::getpid()));
    {
        std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
        if (!stream) throw Error(Errc::io_failure, "cannot open " + temp.string());
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) {
            std::error_code ignored;
            std::filesystem::remove(temp, ignored);
            throw Error(Errc::io_failure, "write failed for " + temp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(temp, ignored);
        throw Error(Errc::io_failure,
                    "cannot move " + temp.string() + " to " + target.string());
    }
}

std::vector<std::filesystem::path> write_report_files(
    const ConvergenceReport& report, const nlohmann::ordered_json& config_echo,
    const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path target = out_dir / name;
        write_text_atomic(target, content);
        written.push_back(target);
    };
    emit("report.json", render_json(report, config_echo).dump(2) + "\n");
    emit("report.csv", render_csv(report));
    std::string plot =
        "set logscale xy\n"
        "set xlabel 'h'\n"
        "set ylabel 'coupled error'\n"
        "set key left top\n"
        "plot";
    bool first = true;
    const auto emit_series = [&](const char* method, const MethodSeries& series) {
        const std::string name = std::string("error_vs_h_") + method + ".dat";
        emit(name, render_gnuplot_data(report, series));
        plot += first ? " " : ", ";
        plot += "'" + name + "' using 1:2 with linespoints title '" + method + "'";
        first = false;
    };
    if (report.direct) emit_series("direct", *report.direct);
    if (report.fast) emit_series("fast", *report.fast);
    plot += "\n";
    emit("error_vs_h.plt", plot);
    return written;
}

}  // namespace fracsde
