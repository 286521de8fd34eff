#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsde {

enum class Errc {
    empty_orders,
    order_out_of_range,
    orders_not_strictly_increasing,
    non_positive_horizon,
    zero_steps,
    out_of_domain,
    factor_does_not_divide_n,
    invalid_window,
    invalid_tolerance,
    tolerance_not_met,
    non_positive_time,
    grid_mismatch,
    soe_window_too_narrow,
    non_finite_state,
    non_positive_error,
    bad_config,
    io_failure,
    unknown_flag,
    malformed_value,
    conflicting_options,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Strictly increasing fractional differentiation orders, each in (0, 1).
class FractionalOrders {
public:
    explicit FractionalOrders(std::vector<double> alphas);

    std::size_t count() const noexcept { return alphas_.size(); }
    double operator[](std::size_t i) const { return alphas_[i]; }
    const std::vector<double>& values() const noexcept { return alphas_; }

private:
    std::vector<double> alphas_;
};

/// Uniform grid t_n = n*h on [0, T] with h = T/N.
class TimeGrid {
public:
    TimeGrid(double horizon, std::int64_t steps);

    double horizon() const noexcept { return horizon_; }
    std::int64_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }
    double node(std::int64_t n) const { return static_cast<double>(n) * dt_; }

    /// Largest node strictly below s, treating (t_n, t_n+1] as owned by t_n;
    /// left_node(0) = 0 by convention.
    double left_node(double s) const;

    bool operator==(const TimeGrid& other) const noexcept {
        return horizon_ == other.horizon_ && steps_ == other.steps_;
    }

private:
    double horizon_;
    std::int64_t steps_;
    double dt_;
};

/// Right-hand-side callback: given (t, y) fill out[0..dim).
using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Problem data for y'(t) + sum_i D^{a_i} y(t) = f(t,y) + g(t,y) dW/dt, y(0) = y0.
/// The differentiation orders travel separately (see FractionalOrders).
struct ProblemSpec {
    std::size_t dim = 1;
    std::vector<double> y0;
    RhsFn drift;
    RhsFn diffusion;
    double horizon = 1.0;

    void validate() const;
};

/// Discrete solution sampled on a TimeGrid, (steps+1) x dim, row-major.
class Trajectory {
public:
    Trajectory(TimeGrid grid, std::size_t dim);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<double> at(std::int64_t n) {
        return {values_.data() + static_cast<std::size_t>(n) * dim_, dim_};
    }
    std::span<const double> at(std::int64_t n) const {
        return {values_.data() + static_cast<std::size_t>(n) * dim_, dim_};
    }
    const std::vector<double>& raw() const noexcept { return values_; }

private:
    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

}  // namespace fracsde
