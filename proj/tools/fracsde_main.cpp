// Command-line front end: study runner plus soe-validate and trajectory
// helpers.  Every flag can also come from a FRACSDE_-prefixed environment
// variable or a flat JSON config file; flags beat the environment, which
// beats the file, which beats built-in defaults.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracsde/brownian.hpp"
#include "fracsde/catalog.hpp"
#include "fracsde/config.hpp"
#include "fracsde/kernels.hpp"
#include "fracsde/mc.hpp"
#include "fracsde/report.hpp"
#include "fracsde/soe.hpp"
#include "fracsde/solvers.hpp"

namespace {

using namespace fracsde;

std::string fixed_sci(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12e", value);
    return buffer;
}

struct StudyFlags {
    RunConfiguration run;
    std::string config_file;
};

void add_study_flags(CLI::App& cmd, StudyFlags& flags) {
    cmd.add_option("--config", flags.config_file, "JSON config file (flat key/value object)")
        ->envname("FRACSDE_CONFIG");
    cmd.add_option("--problem", flags.run.problem, "catalog problem id")
        ->envname("FRACSDE_PROBLEM");
    cmd.add_option("--alphas", flags.run.alphas,
                   "fractional orders, strictly increasing, each in (0,1)")
        ->delimiter(',')
        ->envname("FRACSDE_ALPHAS");
    cmd.add_option("--n", flags.run.n, "resolution ladder; each entry divides the next")
        ->delimiter(',')
        ->envname("FRACSDE_N");
    cmd.add_option("--paths", flags.run.paths, "Monte Carlo sample paths")
        ->envname("FRACSDE_PATHS");
    cmd.add_option("--seed", flags.run.seed, "base RNG seed; path i uses seed+i")
        ->envname("FRACSDE_SEED");
    cmd.add_option("--method", flags.run.method, "direct | fast | both")
        ->envname("FRACSDE_METHOD");
    cmd.add_option("--soe-eps", flags.run.soe_eps,
                   "exponential-sum surrogate tolerance (fast method)")
        ->envname("FRACSDE_SOE_EPS");
    cmd.add_option("--out-dir", flags.run.out_dir, "directory for report files")
        ->envname("FRACSDE_OUT_DIR");
    cmd.add_option("--workers", flags.run.workers, "worker threads for path simulation")
        ->envname("FRACSDE_WORKERS");
    cmd.add_option("--repeat", flags.run.repeat,
                   "timing repetitions per resolution (0 disables timing, else >= 3)")
        ->envname("FRACSDE_REPEAT");
}

// Flags > environment > config file > defaults.  CLI11 already ranks flags
// above envname values, so layering the file under both just means: apply
// the file first, then let the parse overwrite.
RunConfiguration layered_configuration(const CLI::App& cmd, StudyFlags& flags) {
    RunConfiguration merged;
    if (!flags.config_file.empty()) apply_config_file(merged, flags.config_file);
    const auto keep_parsed = [&](const char* name, auto member) {
        if (cmd.count(name) > 0) merged.*member = flags.run.*member;
    };
    keep_parsed("--problem", &RunConfiguration::problem);
    keep_parsed("--alphas", &RunConfiguration::alphas);
    keep_parsed("--n", &RunConfiguration::n);
    keep_parsed("--paths", &RunConfiguration::paths);
    keep_parsed("--seed", &RunConfiguration::seed);
    keep_parsed("--method", &RunConfiguration::method);
    keep_parsed("--soe-eps", &RunConfiguration::soe_eps);
    keep_parsed("--out-dir", &RunConfiguration::out_dir);
    keep_parsed("--workers", &RunConfiguration::workers);
    keep_parsed("--repeat", &RunConfiguration::repeat);
    return merged;
}

int run_study_command(const CLI::App& cmd, StudyFlags& flags) {
    const RunConfiguration run = layered_configuration(cmd, flags);
    const StudyConfig study = to_study_config(run);
    const auto echo = echo_config(run);
    std::printf("effective configuration:\n%s\n", echo.dump(2).c_str());
    std::printf("kernel backend: %s\n",
                kernels::backend_name(kernels::active_backend()));
    std::fflush(stdout);

    // Fail before the study runs, not after, if the report directory is unusable.
    std::error_code dir_ec;
    std::filesystem::create_directories(run.out_dir, dir_ec);
    if (dir_ec)
        throw Error(Errc::io_failure,
                    "cannot create output directory " + run.out_dir + ": " + dir_ec.message());

    const ConvergenceReport report = run_study(study);
    const auto written = write_report_files(report, echo, run.out_dir);
    const auto show = [](const char* name, const MethodSeries& series) {
        std::printf("%s errors:", name);
        for (double e : series.errors) std::printf(" %s", fixed_sci(e).c_str());
        std::printf("\n%s orders:", name);
        for (double o : series.orders) std::printf(" %.4f", o);
        std::printf("\n");
    };
    if (report.direct) show("direct", *report.direct);
    if (report.fast) show("fast", *report.fast);
    for (const auto& path : written) std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

int run_soe_validate(double alpha, double eps, double delta, double t_final,
                     std::int64_t samples, const std::string& out_file) {
    const SoeApproximation soe = build_soe(alpha, eps, delta, t_final);
    const double max_error = validate_soe(soe, samples);
    std::string csv = "alpha,epsilon,delta,n_exp,max_error\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%.17g,%.3e,%.3e,%zu,%s\n", alpha, eps, delta,
                  soe.term_count(), fixed_sci(max_error).c_str());
    csv += line;
    if (out_file.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_text_atomic(out_file, csv);
        std::printf("wrote %s\n", out_file.c_str());
    }
    return 0;
}

int run_trajectory(const std::string& problem_id, const std::vector<double>& alphas,
                   std::int64_t n, std::uint64_t seed, const std::string& method_name,
                   double soe_eps, bool dump_increments, const std::string& out_file) {
    const ProblemSpec problem = find_problem(problem_id).problem;
    const FractionalOrders orders(alphas);
    const TimeGrid grid(problem.horizon, n);
    const BrownianPath path = sample_path(seed, grid);
    Trajectory traj = [&] {
        if (method_name == "direct") return solve_direct(problem, orders, grid, path);
        if (method_name == "fast") {
            std::vector<SoeApproximation> soes;
            for (double alpha : orders.values())
                soes.push_back(build_soe(alpha, soe_eps, grid.dt(), problem.horizon));
            return solve_fast(problem, orders, grid, path, soes);
        }
        throw Error(Errc::malformed_value,
                    "trajectory needs --method direct or fast, got '" + method_name + "'");
    }();
    std::string csv = "t";
    for (std::size_t c = 0; c < problem.dim; ++c) csv += ",y" + std::to_string(c);
    if (dump_increments) csv += ",dW";
    csv += '\n';
    for (std::int64_t k = 0; k <= n; ++k) {
        csv += fixed_sci(grid.node(k));
        for (double v : traj.at(k)) csv += "," + fixed_sci(v);
        if (dump_increments) csv += "," + (k < n ? fixed_sci(path.increment(k)) : std::string());
        csv += '\n';
    }
    if (out_file.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_text_atomic(out_file, csv);
        std::printf("wrote %s\n", out_file.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo solver for multi-term fractional SDEs"};
    app.require_subcommand(0, 1);

    StudyFlags study_flags;
    CLI::App* study = app.add_subcommand(
        "study", "convergence study across a resolution ladder (default command)");
    add_study_flags(*study, study_flags);
    // With no subcommand the same flags work at top level.
    StudyFlags top_flags;
    add_study_flags(app, top_flags);

    double sv_alpha = 0.5, sv_eps = 1e-9, sv_delta = 1e-4, sv_t = 1.0;
    std::int64_t sv_samples = 10000;
    std::string sv_out;
    CLI::App* soe_validate = app.add_subcommand(
        "soe-validate", "measure the true error of the power-law surrogate");
    soe_validate->add_option("--alpha", sv_alpha, "fractional order in (0,1)");
    soe_validate->add_option("--eps", sv_eps, "requested tolerance");
    soe_validate->add_option("--delta", sv_delta, "left end of the certified window");
    soe_validate->add_option("--t-final", sv_t, "right end of the certified window");
    soe_validate->add_option("--samples", sv_samples, "log-spaced sample count");
    soe_validate->add_option("--out", sv_out, "write CSV here instead of stdout");

    std::string tr_problem = "example1", tr_method = "direct", tr_out;
    std::vector<double> tr_alphas = {0.1, 0.2};
    std::int64_t tr_n = 256;
    std::uint64_t tr_seed = 1;
    double tr_eps = 1e-10;
    bool tr_dump = false;
    CLI::App* trajectory =
        app.add_subcommand("trajectory", "dump one path's solution as CSV");
    trajectory->add_option("--problem", tr_problem, "catalog problem id");
    trajectory->add_option("--alphas", tr_alphas, "fractional orders")->delimiter(',');
    trajectory->add_option("--n", tr_n, "step count");
    trajectory->add_option("--seed", tr_seed, "path seed");
    trajectory->add_option("--method", tr_method, "direct | fast");
    trajectory->add_option("--soe-eps", tr_eps, "surrogate tolerance for --method fast");
    trajectory->add_flag("--dump-increments", tr_dump, "append the Brownian increments");
    trajectory->add_option("--out", tr_out, "write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    try {
        // Surface a bad FRACSDE_KERNEL override before doing any work.
        kernels::active_backend();
        if (soe_validate->parsed())
            return run_soe_validate(sv_alpha, sv_eps, sv_delta, sv_t, sv_samples, sv_out);
        if (trajectory->parsed())
            return run_trajectory(tr_problem, tr_alphas, tr_n, tr_seed, tr_method, tr_eps,
                                  tr_dump, tr_out);
        if (study->parsed()) return run_study_command(*study, study_flags);
        return run_study_command(app, top_flags);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
