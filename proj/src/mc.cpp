#include "fracsde/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ctime>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <utility>

#include "fracsde/brownian.hpp"
#include "fracsde/catalog.hpp"
#include "fracsde/kernels.hpp"
#include "fracsde/soe.hpp"

namespace fracsde {
namespace {

// Summation order must not depend on the worker count, so reductions over
// per-path values always run on one thread in ascending path order, pairwise
// for accuracy.
double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct Ladder {
    std::vector<std::int64_t> levels;        // ascending, closed under doubling of listed resolutions
    std::vector<std::size_t> coarse_index;   // per listed resolution, index into levels
    std::vector<std::size_t> refined_index;  // per listed resolution, index of its doubled level
    std::int64_t fine = 0;                   // levels.back(), the sampling resolution
};

Ladder plan_ladder(const std::vector<std::int64_t>& resolutions) {
    Ladder ladder;
    for (std::int64_t r : resolutions) {
        ladder.levels.push_back(r);
        ladder.levels.push_back(2 * r);
    }
    std::sort(ladder.levels.begin(), ladder.levels.end());
    ladder.levels.erase(std::unique(ladder.levels.begin(), ladder.levels.end()),
                        ladder.levels.end());
    ladder.fine = ladder.levels.back();
    auto index_of = [&](std::int64_t n) {
        const auto it = std::lower_bound(ladder.levels.begin(), ladder.levels.end(), n);
        return static_cast<std::size_t>(it - ladder.levels.begin());
    };
    for (std::int64_t r : resolutions) {
        ladder.coarse_index.push_back(index_of(r));
        ladder.refined_index.push_back(index_of(2 * r));
    }
    return ladder;
}

void run_on_workers(int workers, std::int64_t job_count,
                    const std::function<void(std::int64_t)>& job) {
    if (workers <= 1 || job_count <= 1) {
        for (std::int64_t i = 0; i < job_count; ++i) job(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto body = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= job_count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = static_cast<int>(std::min<std::int64_t>(workers, job_count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct LadderResult {
    // diffs[r][i * resolution + (k-1)] = |Y_r(t_k) - Y_2r(t_k)|^2 for path i
    std::vector<std::vector<double>> diffs;
    // final_sq[r][i] = |Y_r(T)|^2 for path i
    std::vector<std::vector<double>> final_sq;
};

// Runs every path through the whole resolution ladder with one stepper and
// records the squared coupled gaps.  Each path gets its own seed, is sampled
// once at the finest level, and is coarsened (never re-drawn) to the others.
LadderResult run_ladder(const ProblemSpec& problem, const FractionalOrders& orders,
                        const std::vector<std::int64_t>& resolutions,
                        std::int64_t path_count, std::uint64_t base_seed, Method method,
                        double soe_epsilon, int workers) {
    const Ladder ladder = plan_ladder(resolutions);
    const std::size_t level_count = ladder.levels.size();
    const std::size_t res_count = resolutions.size();
    const std::size_t dim = static_cast<std::size_t>(problem.dim);

    std::vector<TimeGrid> grids;
    grids.reserve(level_count);
    for (std::int64_t n : ladder.levels) grids.emplace_back(problem.horizon, n);

    std::vector<std::vector<SoeApproximation>> soes(level_count);
    if (method == Method::fast) {
        for (std::size_t l = 0; l < level_count; ++l) {
            const double h = grids[l].dt();
            soes[l].reserve(orders.values().size());
            for (double alpha : orders.values())
                soes[l].push_back(build_soe(alpha, soe_epsilon, h, problem.horizon));
        }
    }
    LadderResult result;
    result.diffs.resize(res_count);
    result.final_sq.resize(res_count);
    for (std::size_t r = 0; r < res_count; ++r) {
        result.diffs[r].resize(static_cast<std::size_t>(path_count * resolutions[r]));
        result.final_sq[r].resize(static_cast<std::size_t>(path_count));
    }

    const TimeGrid& fine_grid = grids.back();
    run_on_workers(workers, path_count, [&](std::int64_t i) {
        const BrownianPath fine_path =
            sample_path(base_seed + static_cast<std::uint64_t>(i), fine_grid);
        std::vector<Trajectory> solutions;
        solutions.reserve(level_count);
        for (std::size_t l = 0; l < level_count; ++l) {
            const std::int64_t factor = ladder.fine / ladder.levels[l];
            const BrownianPath path = factor == 1 ? fine_path : coarsen(fine_path, factor);
            solutions.push_back(method == Method::direct
                                    ? solve_direct(problem, orders, grids[l], path)
                                    : solve_fast(problem, orders, grids[l], path, soes[l]));
        }
        for (std::size_t r = 0; r < res_count; ++r) {
            const Trajectory& coarse = solutions[ladder.coarse_index[r]];
            const Trajectory& refined = solutions[ladder.refined_index[r]];
            const std::int64_t n = resolutions[r];
            double* slot = result.diffs[r].data() + static_cast<std::size_t>(i * n);
            for (std::int64_t k = 1; k <= n; ++k) {
                const auto a = coarse.at(k);
                const auto b = refined.at(2 * k);
                double sq = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    const double d = a[c] - b[c];
                    sq += d * d;
                }
                slot[k - 1] = sq;
            }
            const auto last = coarse.at(n);
            double sq = 0.0;
            for (std::size_t c = 0; c < dim; ++c) sq += last[c] * last[c];
            result.final_sq[r][static_cast<std::size_t>(i)] = sq;
        }
    });
    return result;
}

struct ErrorReduction {
    std::vector<double> errors;
    std::vector<double> errors_se;
};

// e_n = max over grid nodes of the path-mean squared gap, then a square root.
// The standard error is propagated from the mean square at the worst node via
// the delta method: se(sqrt(M)) ~= se(M) / (2 sqrt(M)).
ErrorReduction reduce_errors(const LadderResult& ladder_result,
                             const std::vector<std::int64_t>& resolutions,
                             std::int64_t path_count) {
    ErrorReduction out;
    out.errors.reserve(resolutions.size());
    out.errors_se.reserve(resolutions.size());
    std::vector<double> per_path(static_cast<std::size_t>(path_count));
    for (std::size_t r = 0; r < resolutions.size(); ++r) {
        const std::int64_t n = resolutions[r];
        double worst = 0.0;
        std::int64_t worst_k = 1;
        for (std::int64_t k = 1; k <= n; ++k) {
            for (std::int64_t i = 0; i < path_count; ++i) {
                per_path[static_cast<std::size_t>(i)] =
                    ladder_result.diffs[r][static_cast<std::size_t>(i * n + (k - 1))];
            }
            const double mean = pairwise_sum(per_path) / static_cast<double>(path_count);
            if (mean > worst) {
                worst = mean;
                worst_k = k;
            }
        }
        const double error = std::sqrt(worst);
        double se = 0.0;
        if (error > 0.0 && path_count > 1) {
            double sum_sq_dev = 0.0;
            for (std::int64_t i = 0; i < path_count; ++i) {
                const double dev =
                    ladder_result.diffs[r][static_cast<std::size_t>(i * n + (worst_k - 1))] - worst;
                sum_sq_dev += dev * dev;
            }
            const double var_mean =
                sum_sq_dev / static_cast<double>(path_count - 1) / static_cast<double>(path_count);
            se = std::sqrt(var_mean) / (2.0 * error);
        }
        out.errors.push_back(error);
        out.errors_se.push_back(se);
    }
    return out;
}

std::vector<double> reduce_final_sqnorm(const LadderResult& ladder_result,
                                        std::int64_t path_count) {
    std::vector<double> means;
    means.reserve(ladder_result.final_sq.size());
    for (const auto& column : ladder_result.final_sq)
        means.push_back(pairwise_sum(column) / static_cast<double>(path_count));
    return means;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Median seconds for one stepper over `repeats` passes through a shared,
// pre-generated path batch.  Everything reusable is built before the clock
// starts.
double timed_batch(const ProblemSpec& problem, const FractionalOrders& orders,
                   const TimeGrid& grid, const std::vector<BrownianPath>& paths,
                   Method method, double soe_epsilon, int repeats) {
    std::vector<SoeApproximation> soes;
    if (method == Method::fast) {
        soes.reserve(orders.values().size());
        for (double alpha : orders.values())
            soes.push_back(build_soe(alpha, soe_epsilon, grid.dt(), problem.horizon));
    }
    std::vector<double> seconds;
    seconds.reserve(static_cast<std::size_t>(repeats));
    for (int rep = 0; rep < repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        for (const BrownianPath& path : paths) {
            const Trajectory traj = method == Method::direct
                                        ? solve_direct(problem, orders, grid, path)
                                        : solve_fast(problem, orders, grid, path, soes);
            // Keep the optimizer from discarding the solve.
            volatile double sink = traj.at(grid.steps())[0];
            (void)sink;
        }
        const auto stop = std::chrono::steady_clock::now();
        seconds.push_back(std::chrono::duration<double>(stop - start).count());
    }
    return median(std::move(seconds));
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

}  // namespace

void StudyConfig::validate() const {
    const FractionalOrders checked_orders(alphas);  // reuse the order checks
    (void)checked_orders;
    if (resolutions.empty()) throw Error(Errc::bad_config, "resolution list is empty");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        if (resolutions[i] < 1)
            throw Error(Errc::bad_config, "resolutions must be positive");
        if (i > 0 && (resolutions[i] <= resolutions[i - 1] ||
                      resolutions[i] % resolutions[i - 1] != 0))
            throw Error(Errc::bad_config,
                        "each resolution must be a proper multiple of the previous one");
    }
    if (path_count < 2) throw Error(Errc::bad_config, "need at least 2 paths");
    if (!run_direct && !run_fast)
        throw Error(Errc::bad_config, "at least one method must be enabled");
    if (!(soe_epsilon > 0.0) || soe_epsilon >= 1.0)
        throw Error(Errc::invalid_tolerance, "soe epsilon must lie in (0, 1)");
    if (workers < 1) throw Error(Errc::bad_config, "workers must be positive");
    if (timing_repeats != 0 && timing_repeats < 3)
        throw Error(Errc::bad_config, "timing uses a median: 0 to disable, else at least 3");
}

double coupled_error(const ProblemSpec& problem, const FractionalOrders& orders,
                     std::int64_t resolution, std::int64_t path_count,
                     std::uint64_t base_seed, Method method,
                     const CoupledErrorOptions& options) {
    problem.validate();
    if (resolution < 1) throw Error(Errc::zero_steps, "resolution must be positive");
    if (path_count < 2) throw Error(Errc::bad_config, "need at least 2 paths");
    if (options.workers < 1) throw Error(Errc::bad_config, "workers must be positive");
    const std::vector<std::int64_t> resolutions{resolution};
    const LadderResult run = run_ladder(problem, orders, resolutions, path_count, base_seed,
                                        method, options.soe_epsilon, options.workers);
    return reduce_errors(run, resolutions, path_count).errors.front();
}

std::vector<double> estimate_orders(const std::vector<double>& errors) {
    for (double e : errors) {
        if (!(e > 0.0) || !std::isfinite(e))
            throw Error(Errc::non_positive_error,
                        "order estimation needs positive finite errors");
    }
    std::vector<double> orders;
    if (errors.size() < 2) return orders;
    orders.reserve(errors.size() - 1);
    for (std::size_t k = 0; k + 1 < errors.size(); ++k)
        orders.push_back(std::log2(errors[k] / errors[k + 1]));
    return orders;
}

BenchmarkTiming benchmark(const ProblemSpec& problem, const FractionalOrders& orders,
                          std::int64_t resolution, std::int64_t path_count,
                          std::uint64_t base_seed, double soe_epsilon, int repeats) {
    problem.validate();
    if (resolution < 1) throw Error(Errc::zero_steps, "resolution must be positive");
    if (path_count < 1) throw Error(Errc::bad_config, "need at least 1 path");
    if (repeats < 3)
        throw Error(Errc::bad_config, "timing uses a median: need at least 3 repeats");
    const TimeGrid grid(problem.horizon, resolution);
    std::vector<BrownianPath> paths;
    paths.reserve(static_cast<std::size_t>(path_count));
    for (std::int64_t i = 0; i < path_count; ++i)
        paths.push_back(sample_path(base_seed + static_cast<std::uint64_t>(i), grid));
    BenchmarkTiming timing;
    timing.direct_seconds =
        timed_batch(problem, orders, grid, paths, Method::direct, soe_epsilon, repeats);
    timing.fast_seconds =
        timed_batch(problem, orders, grid, paths, Method::fast, soe_epsilon, repeats);
    return timing;
}

ConvergenceReport run_study(const StudyConfig& config) {
    config.validate();
    const ProblemSpec problem = find_problem(config.problem_id).problem;
    const FractionalOrders orders(config.alphas);

    ConvergenceReport report;
    report.config = config;
    report.rng_id = rng::kGeneratorId;
    report.kernel_backend = kernels::backend_name(kernels::active_backend());
    report.timestamp = utc_timestamp();
    report.resolutions = config.resolutions;

    auto run_method = [&](Method method) {
        MethodSeries series;
        const LadderResult run =
            run_ladder(problem, orders, config.resolutions, config.path_count,
                       config.base_seed, method, config.soe_epsilon, config.workers);
        ErrorReduction reduced = reduce_errors(run, config.resolutions, config.path_count);
        series.errors = std::move(reduced.errors);
        series.errors_se = std::move(reduced.errors_se);
        series.orders = estimate_orders(series.errors);
        series.final_sqnorm_mean = reduce_final_sqnorm(run, config.path_count);
        return series;
    };
    if (config.run_direct) report.direct = run_method(Method::direct);
    if (config.run_fast) report.fast = run_method(Method::fast);

    if (config.timing_repeats > 0) {
        if (report.direct) report.direct->cpu_seconds.reserve(config.resolutions.size());
        if (report.fast) report.fast->cpu_seconds.reserve(config.resolutions.size());
        for (std::int64_t n : config.resolutions) {
            const TimeGrid grid(problem.horizon, n);
            std::vector<BrownianPath> paths;
            paths.reserve(static_cast<std::size_t>(config.path_count));
            for (std::int64_t i = 0; i < config.path_count; ++i)
                paths.push_back(
                    sample_path(config.base_seed + static_cast<std::uint64_t>(i), grid));
            if (report.direct)
                report.direct->cpu_seconds.push_back(
                    timed_batch(problem, orders, grid, paths, Method::direct,
                                config.soe_epsilon, config.timing_repeats));
            if (report.fast)
                report.fast->cpu_seconds.push_back(
                    timed_batch(problem, orders, grid, paths, Method::fast,
                                config.soe_epsilon, config.timing_repeats));
        }
    }
    return report;
}

}  // namespace fracsde
