#include "fracsde/solvers.hpp"

#include <cmath>
#include <string>

#include "fracsde/kernels.hpp"

namespace fracsde {

namespace {

void require_compatible(const ProblemSpec& problem, const TimeGrid& grid,
                        const BrownianPath& path) {
    problem.validate();
    if (problem.horizon != grid.horizon())
        throw Error(Errc::grid_mismatch, "problem horizon differs from grid horizon");
    if (!(path.grid == grid))
        throw Error(Errc::grid_mismatch, "Brownian path lives on a different grid");
}

void check_finite(std::span<const double> state, std::int64_t step) {
    for (double v : state)
        if (!std::isfinite(v))
            throw Error(Errc::non_finite_state,
                        "state not finite at step " + std::to_string(step));
}

/// Shared one-step update: given sums F = sum f h and G = sum g dW through
/// the current step and the combined history sum (without the factor h),
/// write y0 - h * history + F + G.
void combine_step(const ProblemSpec& problem, const std::vector<double>& history,
                  const std::vector<double>& drift_sum, const std::vector<double>& diff_sum,
                  double h, std::span<double> out) {
    for (std::size_t c = 0; c < problem.dim; ++c)
        out[c] = problem.y0[c] - h * history[c] + drift_sum[c] + diff_sum[c];
}

}  // namespace

const char* method_name(Method method) {
    return method == Method::fast ? "fast" : "direct";
}

SolverConfig SolverConfig::for_orders(Method method, const FractionalOrders& orders,
                                      double soe_epsilon) {
    SolverConfig config;
    config.method = method;
    config.soe_epsilon = soe_epsilon;
    config.gamma_values.reserve(orders.count());
    for (std::size_t i = 0; i < orders.count(); ++i)
        config.gamma_values.push_back(std::tgamma(1.0 - orders[i]));
    return config;
}

double update_history(double accum, double x_prev, double h, double s) {
    return std::exp(-h * s) * accum + std::exp(-2.0 * h * s) * x_prev * h;
}

Trajectory solve_direct(const ProblemSpec& problem, const FractionalOrders& orders,
                        const TimeGrid& grid, const BrownianPath& path) {
    require_compatible(problem, grid, path);
    const auto config = SolverConfig::for_orders(Method::direct, orders, 0.0);
    const std::size_t dim = problem.dim;
    const std::size_t m = orders.count();
    const double h = grid.dt();

    Trajectory traj(grid, dim);
    for (std::size_t c = 0; c < dim; ++c) traj.at(0)[c] = problem.y0[c];

    std::vector<double> drift_sum(dim, 0.0), diff_sum(dim, 0.0);
    std::vector<double> fbuf(dim), gbuf(dim), history(dim), order_sum(dim);

    for (std::int64_t n = 1; n <= grid.steps(); ++n) {
        const auto prev = traj.at(n - 1);
        const double t_prev = grid.node(n - 1);
        problem.drift(t_prev, prev, fbuf);
        problem.diffusion(t_prev, prev, gbuf);
        const double dw = path.increment(n - 1);
        for (std::size_t c = 0; c < dim; ++c) {
            drift_sum[c] += fbuf[c] * h;
            diff_sum[c] += gbuf[c] * dw;
        }

        for (std::size_t c = 0; c < dim; ++c) history[c] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            kernels::powlaw_weighted_sum(traj.raw().data(), static_cast<std::size_t>(n),
                                         dim, h, orders[i], order_sum.data());
            const double inv_gamma = 1.0 / config.gamma_values[i];
            for (std::size_t c = 0; c < dim; ++c) history[c] += inv_gamma * order_sum[c];
        }

        combine_step(problem, history, drift_sum, diff_sum, h, traj.at(n));
        check_finite(traj.at(n), n);
    }
    return traj;
}

Trajectory solve_fast(const ProblemSpec& problem, const FractionalOrders& orders,
                      const TimeGrid& grid, const BrownianPath& path,
                      const std::vector<SoeApproximation>& soes) {
    require_compatible(problem, grid, path);
    const std::size_t dim = problem.dim;
    const std::size_t m = orders.count();
    const double h = grid.dt();

    if (soes.size() != m)
        throw Error(Errc::grid_mismatch, "need one exponential surrogate per order");
    for (std::size_t i = 0; i < m; ++i) {
        if (soes[i].alpha != orders[i])
            throw Error(Errc::grid_mismatch,
                        "surrogate " + std::to_string(i) + " built for a different order");
        if (soes[i].delta > h)
            throw Error(Errc::soe_window_too_narrow,
                        "surrogate resolves nothing below delta > step size");
        if (soes[i].t_final < grid.horizon() * (1.0 - 1e-12))
            throw Error(Errc::soe_window_too_narrow,
                        "surrogate horizon shorter than the grid horizon");
    }

    const auto config = SolverConfig::for_orders(Method::fast, orders, 0.0);
    Trajectory traj(grid, dim);
    for (std::size_t c = 0; c < dim; ++c) traj.at(0)[c] = problem.y0[c];

    std::vector<double> drift_sum(dim, 0.0), diff_sum(dim, 0.0);
    std::vector<double> fbuf(dim), gbuf(dim), history(dim), order_sum(dim);

    // first step: plain one-step update, identical to solve_direct
    {
        const auto prev = traj.at(0);
        problem.drift(0.0, prev, fbuf);
        problem.diffusion(0.0, prev, gbuf);
        const double dw = path.increment(0);
        for (std::size_t c = 0; c < dim; ++c) {
            drift_sum[c] += fbuf[c] * h;
            diff_sum[c] += gbuf[c] * dw;
        }
        for (std::size_t c = 0; c < dim; ++c) history[c] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            kernels::powlaw_weighted_sum(traj.raw().data(), 1, dim, h, orders[i],
                                         order_sum.data());
            const double inv_gamma = 1.0 / config.gamma_values[i];
            for (std::size_t c = 0; c < dim; ++c) history[c] += inv_gamma * order_sum[c];
        }
        combine_step(problem, history, drift_sum, diff_sum, h, traj.at(1));
        check_finite(traj.at(1), 1);
    }

    // per-order recurrence tables: decay e^(-h s), push e^(-2 h s) h
    HistoryState state;
    state.accumulators.resize(m);
    std::vector<std::vector<double>> decays(m), pushes(m);
    std::vector<double> local(m);  // h^(1-a_i) for the newest history term
    for (std::size_t i = 0; i < m; ++i) {
        const auto& soe = soes[i];
        const std::size_t terms = soe.term_count();
        state.accumulators[i].assign(terms * dim, 0.0);
        decays[i].resize(terms);
        pushes[i].resize(terms);
        for (std::size_t j = 0; j < terms; ++j) {
            decays[i][j] = std::exp(-h * soe.exponents[j]);
            pushes[i][j] = std::exp(-2.0 * h * soe.exponents[j]) * h;
        }
        local[i] = std::exp((1.0 - orders[i]) * std::log(h));
    }

    for (std::int64_t n = 1; n < grid.steps(); ++n) {
        // accumulators move from t_n to t_n+1 fed by the state at t_n-1
        state.lagged_state.assign(traj.at(n - 1).begin(), traj.at(n - 1).end());
        for (std::size_t i = 0; i < m; ++i)
            kernels::exp_decay_update(state.accumulators[i].data(), decays[i].data(),
                                      pushes[i].data(), state.lagged_state.data(),
                                      soes[i].term_count(), dim);

        const auto current = traj.at(n);
        const double t_n = grid.node(n);
        problem.drift(t_n, current, fbuf);
        problem.diffusion(t_n, current, gbuf);
        const double dw = path.increment(n);
        for (std::size_t c = 0; c < dim; ++c) {
            drift_sum[c] += fbuf[c] * h;
            diff_sum[c] += gbuf[c] * dw;
        }

        for (std::size_t c = 0; c < dim; ++c) history[c] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            kernels::weighted_term_sum(state.accumulators[i].data(),
                                       soes[i].weights.data(), soes[i].term_count(),
                                       dim, order_sum.data());
            const double inv_gamma = 1.0 / config.gamma_values[i];
            for (std::size_t c = 0; c < dim; ++c)
                history[c] += inv_gamma * (order_sum[c] + local[i] * current[c]);
        }

        const auto next = traj.at(n + 1);
        for (std::size_t c = 0; c < dim; ++c)
            next[c] = problem.y0[c] - history[c] + drift_sum[c] + diff_sum[c];
        check_finite(next, n + 1);
    }
    return traj;
}

}  // namespace fracsde
