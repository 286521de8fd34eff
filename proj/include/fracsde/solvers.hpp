#pragma once

#include <vector>

#include "fracsde/brownian.hpp"
#include "fracsde/core.hpp"
#include "fracsde/soe.hpp"

namespace fracsde {

enum class Method { direct, fast };

const char* method_name(Method method);

struct SolverConfig {
    Method method = Method::direct;
    double soe_epsilon = 1e-10;
    std::vector<double> gamma_values;  // Gamma(1 - alpha_i), full precision

    static SolverConfig for_orders(Method method, const FractionalOrders& orders,
                                   double soe_epsilon);
};

/// Exponential history accumulators of the fast stepper: one slot per
/// surrogate term per order, plus the state one step behind the front.
struct HistoryState {
    std::vector<std::vector<double>> accumulators;  // [order][term*dim]
    std::vector<double> lagged_state;
};

/// One update of a history accumulator:
/// exp(-h s) * accum + exp(-2 h s) * x_prev * h.
double update_history(double accum, double x_prev, double h, double s);

/// Time stepper in integrated form with the full power-law history sum
/// recomputed each step (quadratic cost in the step count).
Trajectory solve_direct(const ProblemSpec& problem, const FractionalOrders& orders,
                        const TimeGrid& grid, const BrownianPath& path);

/// Same stepper with each power-law kernel replaced by its exponential-sum
/// surrogate, advanced by a constant-time recurrence per term; `soes` holds
/// one surrogate per order, built with delta <= grid.dt() and a horizon
/// covering grid.horizon().  The first step is the plain one-step update and
/// matches solve_direct bit for bit.
Trajectory solve_fast(const ProblemSpec& problem, const FractionalOrders& orders,
                      const TimeGrid& grid, const BrownianPath& path,
                      const std::vector<SoeApproximation>& soes);

}  // namespace fracsde
