#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracsde/core.hpp"
#include "fracsde/solvers.hpp"

namespace fracsde {

struct StudyConfig {
    std::string problem_id = "example1";
    std::vector<double> alphas = {0.1, 0.2};
    std::vector<std::int64_t> resolutions = {128, 256};
    std::int64_t path_count = 200;
    std::uint64_t base_seed = 1;
    bool run_direct = true;
    bool run_fast = true;
    double soe_epsilon = 1e-10;
    int workers = 1;
    int timing_repeats = 3;  // 0 skips timing; otherwise at least 3

    void validate() const;
};

struct MethodSeries {
    std::vector<double> errors;             // one per resolution
    std::vector<double> errors_se;          // sampling standard error of each entry
    std::vector<double> orders;             // log2 ratios, one fewer
    std::vector<double> cpu_seconds;        // per resolution; empty if timing off
    std::vector<double> final_sqnorm_mean;  // mean |Y(T)|^2 per resolution
};

struct ConvergenceReport {
    StudyConfig config;
    std::string rng_id;
    std::string kernel_backend;
    std::string timestamp;  // ISO 8601 UTC
    std::vector<std::int64_t> resolutions;
    std::optional<MethodSeries> direct;
    std::optional<MethodSeries> fast;
};

struct CoupledErrorOptions {
    double soe_epsilon = 1e-10;
    int workers = 1;
};

/// Coupled two-level error at one resolution: every path is drawn on the
/// doubled grid, coarsened down, solved at both levels with the same noise,
/// and the root of the worst per-node mean squared gap is returned.
double coupled_error(const ProblemSpec& problem, const FractionalOrders& orders,
                     std::int64_t resolution, std::int64_t path_count,
                     std::uint64_t base_seed, Method method,
                     const CoupledErrorOptions& options = {});

/// orders[k] = log2(errors[k] / errors[k+1]); every input must be positive
/// and finite.
std::vector<double> estimate_orders(const std::vector<double>& errors);

struct BenchmarkTiming {
    double direct_seconds = 0.0;
    double fast_seconds = 0.0;
};

/// Median wall-clock seconds over `repeats >= 3` repetitions of solving the
/// identical pre-generated path batch with each stepper.  Path sampling and
/// surrogate construction stay outside the timed section; runs are
/// serialized on one thread.
BenchmarkTiming benchmark(const ProblemSpec& problem, const FractionalOrders& orders,
                          std::int64_t resolution, std::int64_t path_count,
                          std::uint64_t base_seed, double soe_epsilon, int repeats);

/// Full study: coupled errors across the resolution ladder (paths drawn once
/// at twice the finest resolution and coarsened to every level), order
/// estimates, timing when enabled, and run metadata.  Output is bit-identical
/// for any worker count.
ConvergenceReport run_study(const StudyConfig& config);

}  // namespace fracsde
