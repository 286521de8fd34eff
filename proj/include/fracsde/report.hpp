#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracsde/mc.hpp"

namespace fracsde {

/// Fixed-layout CSV: header `n,error,order,cpu_direct_s,cpu_fast_s`, one row
/// per resolution.  The error/order columns come from the direct stepper
/// when it ran, otherwise from the fast one; the order cell of the first row
/// and any column without data stay empty.  Formatting is locked down so the
/// same study yields the same bytes.
std::string render_csv(const ConvergenceReport& report);

/// Full study report with a stable key order.  `config_echo` is embedded
/// verbatim under "config" so a caller can round-trip its own input keys.
nlohmann::ordered_json render_json(const ConvergenceReport& report,
                                   const nlohmann::ordered_json& config_echo);

/// Two-column `h error` data block for log-log plotting.
std::string render_gnuplot_data(const ConvergenceReport& report, const MethodSeries& series);

/// Writes `content` through a temporary file in the target directory and
/// renames it into place, so the target is never observed half-written.
void write_text_atomic(const std::filesystem::path& target, const std::string& content);

/// Emits report.json, report.csv, per-method error_vs_h_<method>.dat files,
/// and an error_vs_h.plt gnuplot script into `out_dir`; returns the paths
/// written.
std::vector<std::filesystem::path> write_report_files(
    const ConvergenceReport& report, const nlohmann::ordered_json& config_echo,
    const std::filesystem::path& out_dir);

}  // namespace fracsde
