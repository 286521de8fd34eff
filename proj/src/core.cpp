#include "fracsde/core.hpp"

#include <algorithm>
#include <cmath>

namespace fracsde {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::empty_orders: return "EmptyOrders";
        case Errc::order_out_of_range: return "OrderOutOfRange";
        case Errc::orders_not_strictly_increasing: return "OrdersNotStrictlyIncreasing";
        case Errc::non_positive_horizon: return "NonPositiveHorizon";
        case Errc::zero_steps: return "ZeroSteps";
        case Errc::out_of_domain: return "OutOfDomain";
        case Errc::factor_does_not_divide_n: return "FactorDoesNotDivideN";
        case Errc::invalid_window: return "InvalidWindow";
        case Errc::invalid_tolerance: return "InvalidTolerance";
        case Errc::tolerance_not_met: return "ToleranceNotMet";
        case Errc::non_positive_time: return "NonPositiveTime";
        case Errc::grid_mismatch: return "GridMismatch";
        case Errc::soe_window_too_narrow: return "SoeWindowTooNarrow";
        case Errc::non_finite_state: return "NonFiniteState";
        case Errc::non_positive_error: return "NonPositiveError";
        case Errc::bad_config: return "BadConfig";
        case Errc::io_failure: return "IoFailure";
        case Errc::unknown_flag: return "UnknownFlag";
        case Errc::malformed_value: return "MalformedValue";
        case Errc::conflicting_options: return "ConflictingOptions";
    }
    return "UnknownError";
}

FractionalOrders::FractionalOrders(std::vector<double> alphas)
    : alphas_(std::move(alphas)) {
    if (alphas_.empty())
        throw Error(Errc::empty_orders, "at least one differentiation order required");
    for (double a : alphas_) {
        if (!(a > 0.0 && a < 1.0))
            throw Error(Errc::order_out_of_range,
                        "order " + std::to_string(a) + " outside (0, 1)");
    }
    for (std::size_t i = 1; i < alphas_.size(); ++i) {
        if (!(alphas_[i - 1] < alphas_[i]))
            throw Error(Errc::orders_not_strictly_increasing,
                        "orders must be strictly increasing");
    }
}

TimeGrid::TimeGrid(double horizon, std::int64_t steps)
    : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw Error(Errc::non_positive_horizon, "horizon must be positive and finite");
    if (steps < 1)
        throw Error(Errc::zero_steps, "step count must be at least 1");
    dt_ = horizon_ / static_cast<double>(steps_);
}

double TimeGrid::left_node(double s) const {
    // node(steps) may differ from horizon by one rounding unit
    const double top = std::max(horizon_, node(steps_));
    if (s < 0.0 || s > top)
        throw Error(Errc::out_of_domain, "query point outside [0, horizon]");
    if (s == 0.0) return 0.0;
    auto i = static_cast<std::int64_t>(std::floor(s / dt_));
    i = std::clamp(i, std::int64_t{0}, steps_ - 1);
    // want the unique i with node(i) < s <= node(i+1)
    while (i > 0 && node(i) >= s) --i;
    while (i + 1 < steps_ && node(i + 1) < s) ++i;
    return node(i);
}

void ProblemSpec::validate() const {
    if (dim == 0)
        throw Error(Errc::bad_config, "state dimension must be positive");
    if (y0.size() != dim)
        throw Error(Errc::bad_config, "initial state size does not match dimension");
    if (!drift || !diffusion)
        throw Error(Errc::bad_config, "drift and diffusion callbacks required");
    if (!(horizon > 0.0))
        throw Error(Errc::non_positive_horizon, "horizon must be positive");
}

Trajectory::Trajectory(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim),
      values_(static_cast<std::size_t>(grid.steps() + 1) * dim, 0.0) {
    if (dim == 0)
        throw Error(Errc::bad_config, "trajectory dimension must be positive");
}

}  // namespace fracsde
