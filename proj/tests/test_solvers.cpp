#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracsde/catalog.hpp"
#include "fracsde/kernels.hpp"
#include "fracsde/solvers.hpp"

using namespace fracsde;

namespace {

/// Independent brute-force stepper written straight from the update rule,
/// recomputing every sum from scratch with std::pow each step.
std::vector<double> brute_force_scalar(const ProblemSpec& problem,
                                       const std::vector<double>& alphas,
                                       const TimeGrid& grid, const BrownianPath& path) {
    const double h = grid.dt();
    const auto n_steps = static_cast<std::size_t>(grid.steps());
    std::vector<double> y(n_steps + 1);
    y[0] = problem.y0[0];
    std::vector<double> f_at(n_steps), g_at(n_steps);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        {
            double fv, gv;
            std::span<double> fs(&fv, 1), gs(&gv, 1);
            std::span<const double> ys(&y[n - 1], 1);
            problem.drift(grid.node(static_cast<std::int64_t>(n - 1)), ys, fs);
            problem.diffusion(grid.node(static_cast<std::int64_t>(n - 1)), ys, gs);
            f_at[n - 1] = fv;
            g_at[n - 1] = gv;
        }
        double total = problem.y0[0];
        for (double alpha : alphas) {
            double hist = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                hist += std::pow(grid.node(static_cast<std::int64_t>(n)) -
                                     grid.node(static_cast<std::int64_t>(j)),
                                 -alpha) *
                        y[j];
            total -= hist * h / std::tgamma(1.0 - alpha);
        }
        for (std::size_t j = 0; j < n; ++j) {
            total += f_at[j] * h;
            total += g_at[j] * path.increments[j];
        }
        y[n] = total;
    }
    return y;
}

ProblemSpec constant_zero_problem(double y0) {
    ProblemSpec p;
    p.dim = 1;
    p.y0 = {y0};
    p.horizon = 1.0;
    p.drift = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.diffusion = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    return p;
}

std::vector<SoeApproximation> build_surrogates(const FractionalOrders& orders,
                                               double eps, const TimeGrid& grid) {
    std::vector<SoeApproximation> soes;
    for (std::size_t i = 0; i < orders.count(); ++i)
        soes.push_back(build_soe(orders[i], eps, grid.dt(), grid.horizon()));
    return soes;
}

}  // namespace

TEST_CASE("frozen single-order deterministic values") {
    // m=1, alpha=0.5, f=g=0, y0=1, T=1, N=4; reference digits computed
    // independently with 30-digit arithmetic
    const auto problem = constant_zero_problem(1.0);
    const FractionalOrders orders({0.5});
    const TimeGrid grid(1.0, 4);
    BrownianPath path{grid, 0, {0.0, 0.0, 0.0, 0.0}};
    const auto traj = solve_direct(problem, orders, grid, path);
    CHECK(traj.at(1)[0] == doctest::Approx(0.71790520822612186).epsilon(5e-15));
    CHECK(traj.at(2)[0] == doctest::Approx(0.59801153957135319).epsilon(5e-15));
    CHECK(traj.at(3)[0] == doctest::Approx(0.52523518485770565).epsilon(5e-15));
    CHECK(traj.at(4)[0] == doctest::Approx(0.47457702100767114).epsilon(5e-15));
}

TEST_CASE("direct stepper matches the brute-force oracle on catalog problems") {
    const std::vector<std::vector<double>> order_sets = {
        {0.6, 0.8}, {0.1, 0.2}, {0.1, 0.5, 0.85}, {0.3, 0.35, 0.4}};
    for (const auto& entry : problem_catalog()) {
        for (const auto& alphas : order_sets) {
            const FractionalOrders orders(alphas);
            for (std::int64_t n : {2, 4, 8, 16}) {
                const TimeGrid grid(entry.problem.horizon, n);
                const auto path = sample_path(1000 + static_cast<std::uint64_t>(n), grid);
                const auto traj = solve_direct(entry.problem, orders, grid, path);
                const auto ref = brute_force_scalar(entry.problem, alphas, grid, path);
                for (std::int64_t k = 0; k <= n; ++k) {
                    const double scale = std::abs(ref[static_cast<std::size_t>(k)]) + 1.0;
                    CHECK(std::abs(traj.at(k)[0] - ref[static_cast<std::size_t>(k)]) <=
                          1e-12 * scale);
                }
            }
        }
    }
}

TEST_CASE("update_history frozen examples") {
    CHECK(update_history(0.3, 2.0, 0.1, 5.0) ==
          doctest::Approx(0.25553508614807849).epsilon(1e-15));
    // s -> 0 keeps accum + h x_prev
    CHECK(update_history(0.0, 1.0, 0.5, 1e-14) == doctest::Approx(0.5).epsilon(1e-9));
    // h s = ln 2 halves the accumulator
    CHECK(update_history(1.0, 0.0, 1.0, std::log(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("maintained accumulators equal literal exponential sums") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> s_dist(0.01, 200.0);
    std::uniform_real_distribution<double> h_dist(1e-3, 0.1);
    std::uniform_real_distribution<double> x_dist(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double s = s_dist(rng);
        const double h = h_dist(rng);
        const int n_max = 64;
        std::vector<double> x(n_max);
        for (auto& v : x) v = x_dist(rng);
        double maintained = 0.0;  // U(t_1) = 0
        for (int n = 1; n < n_max; ++n) {
            // advance U(t_n) -> U(t_n+1) fed by x_(n-1)
            maintained = update_history(maintained, x[n - 1], h, s);
            double literal = 0.0;
            for (int k = 0; k <= n - 1; ++k)
                literal += std::exp(-s * (static_cast<double>(n + 1 - k) * h)) * x[k] * h;
            const double scale = std::abs(literal) + 1e-30;
            CHECK(std::abs(maintained - literal) <= 1e-12 * scale + 1e-18);
        }
    }
}

TEST_CASE("fast first step equals direct first step exactly") {
    const auto& entry = find_problem("example1");
    const FractionalOrders orders({0.6, 0.8});
    const TimeGrid grid(1.0, 64);
    const auto path = sample_path(7, grid);
    const auto soes = build_surrogates(orders, 1e-8, grid);
    const auto direct = solve_direct(entry.problem, orders, grid, path);
    const auto fast = solve_fast(entry.problem, orders, grid, path, soes);
    CHECK(fast.at(1)[0] == direct.at(1)[0]);
}

TEST_CASE("fast tracks direct on a deterministic single-order run") {
    const auto problem = constant_zero_problem(1.0);
    const FractionalOrders orders({0.5});
    const TimeGrid grid(1.0, 1024);
    BrownianPath path{grid, 0, std::vector<double>(1024, 0.0)};
    const auto soes = build_surrogates(orders, 1e-10, grid);
    const auto direct = solve_direct(problem, orders, grid, path);
    const auto fast = solve_fast(problem, orders, grid, path, soes);
    double worst = 0.0;
    for (std::int64_t n = 0; n <= 1024; ++n)
        worst = std::max(worst, std::abs(direct.at(n)[0] - fast.at(n)[0]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("fast tracks direct on catalog problems with noise") {
    for (const auto& entry : problem_catalog()) {
        const FractionalOrders orders({0.1, 0.5, 0.85});
        const TimeGrid grid(1.0, 512);
        const auto path = sample_path(99, grid);
        const auto soes = build_surrogates(orders, 1e-10, grid);
        const auto direct = solve_direct(entry.problem, orders, grid, path);
        const auto fast = solve_fast(entry.problem, orders, grid, path, soes);
        double worst = 0.0;
        for (std::int64_t n = 0; n <= 512; ++n)
            worst = std::max(worst, std::abs(direct.at(n)[0] - fast.at(n)[0]));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("solvers are deterministic given identical inputs") {
    const auto& entry = find_problem("example1");
    const FractionalOrders orders({0.1, 0.2});
    const TimeGrid grid(1.0, 128);
    const auto path = sample_path(5, grid);
    const auto a = solve_direct(entry.problem, orders, grid, path);
    const auto b = solve_direct(entry.problem, orders, grid, path);
    CHECK(a.raw() == b.raw());
    const auto soes = build_surrogates(orders, 1e-9, grid);
    const auto c = solve_fast(entry.problem, orders, grid, path, soes);
    const auto d = solve_fast(entry.problem, orders, grid, path, soes);
    CHECK(c.raw() == d.raw());
}

TEST_CASE("zero dynamics stay constant under both steppers") {
    const auto problem = constant_zero_problem(0.0);
    const FractionalOrders orders({0.3, 0.7});
    const TimeGrid grid(1.0, 32);
    const auto path = sample_path(1, grid);
    const auto direct = solve_direct(problem, orders, grid, path);
    const auto soes = build_surrogates(orders, 1e-9, grid);
    const auto fast = solve_fast(problem, orders, grid, path, soes);
    for (std::int64_t n = 0; n <= 32; ++n) {
        CHECK(direct.at(n)[0] == 0.0);
        CHECK(fast.at(n)[0] == 0.0);
    }
}

TEST_CASE("grid mismatches are rejected") {
    const auto& entry = find_problem("example1");
    const FractionalOrders orders({0.5});
    const TimeGrid grid(1.0, 16);
    const auto path = sample_path(3, TimeGrid(1.0, 32));
    try {
        solve_direct(entry.problem, orders, grid, path);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::grid_mismatch);
    }
    ProblemSpec shifted = entry.problem;
    shifted.horizon = 2.0;
    CHECK_THROWS_AS(solve_direct(shifted, orders, grid, sample_path(3, grid)), Error);
}

TEST_CASE("fast rejects unusable surrogates") {
    const auto& entry = find_problem("example1");
    const FractionalOrders orders({0.5});
    const TimeGrid grid(1.0, 16);  // h = 0.0625
    const auto path = sample_path(3, grid);

    // delta wider than the step size
    auto coarse = build_soe(0.5, 1e-8, 0.25, 1.0);
    try {
        solve_fast(entry.problem, orders, grid, path, {coarse});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::soe_window_too_narrow);
    }

    // horizon shorter than the grid
    auto short_soe = build_soe(0.5, 1e-8, 0.01, 0.5);
    CHECK_THROWS_AS(solve_fast(entry.problem, orders, grid, path, {short_soe}), Error);

    // wrong order
    auto wrong = build_soe(0.4, 1e-8, 0.01, 1.0);
    CHECK_THROWS_AS(solve_fast(entry.problem, orders, grid, path, {wrong}), Error);

    // wrong count
    CHECK_THROWS_AS(solve_fast(entry.problem, orders, grid, path, {}), Error);
}

TEST_CASE("explosive drift reports the failing step") {
    ProblemSpec bomb;
    bomb.dim = 1;
    bomb.y0 = {1.0};
    bomb.horizon = 1.0;
    bomb.drift = [](double, std::span<const double> y, std::span<double> out) {
        out[0] = std::exp(y[0] * y[0]);
    };
    bomb.diffusion = [](double, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    const FractionalOrders orders({0.5});
    const TimeGrid grid(1.0, 64);
    BrownianPath path{grid, 0, std::vector<double>(64, 0.0)};
    try {
        solve_direct(bomb, orders, grid, path);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_finite_state);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("component-wise problems decouple exactly") {
    kernels::force_backend(kernels::Backend::scalar);
    ProblemSpec pair;
    pair.dim = 2;
    pair.y0 = {0.1, 0.1};
    pair.horizon = 1.0;
    pair.drift = [](double t, std::span<const double> y, std::span<double> out) {
        for (std::size_t c = 0; c < 2; ++c) out[c] = std::sin(t * y[c]);
    };
    pair.diffusion = [](double, std::span<const double> y, std::span<double> out) {
        for (std::size_t c = 0; c < 2; ++c) out[c] = std::sin(y[c]);
    };
    const auto& scalar_entry = find_problem("example1");
    const FractionalOrders orders({0.6, 0.8});
    const TimeGrid grid(1.0, 64);
    const auto path = sample_path(21, grid);
    const auto twin = solve_direct(pair, orders, grid, path);
    const auto solo = solve_direct(scalar_entry.problem, orders, grid, path);
    for (std::int64_t n = 0; n <= 64; ++n) {
        CHECK(twin.at(n)[0] == solo.at(n)[0]);
        CHECK(twin.at(n)[1] == solo.at(n)[0]);
    }
}

TEST_CASE("solver config records full-precision gamma values") {
    const FractionalOrders orders({0.1, 0.5, 0.85});
    const auto config = SolverConfig::for_orders(Method::fast, orders, 1e-10);
    REQUIRE(config.gamma_values.size() == 3);
    CHECK(config.gamma_values[0] == std::tgamma(1.0 - 0.1));
    CHECK(config.gamma_values[1] == std::tgamma(1.0 - 0.5));
    CHECK(config.gamma_values[2] == std::tgamma(1.0 - 0.85));
    CHECK(config.soe_epsilon == 1e-10);
    CHECK(config.method == Method::fast);
}
