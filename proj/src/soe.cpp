#include "fracsde/soe.hpp"

#include <algorithm>
#include <cmath>

#include "fracsde/quadrature.hpp"

namespace fracsde {

namespace {

SoeApproximation assemble(double alpha, double epsilon, double delta,
                          double t_final, int nodes_per_panel) {
    SoeApproximation soe;
    soe.alpha = alpha;
    soe.epsilon = epsilon;
    soe.delta = delta;
    soe.t_final = t_final;

    const double inv_gamma = 1.0 / std::tgamma(alpha);

    // leading panel [0, s0] with s0 ~ 1/t_final, integrated against the
    // weight s^(alpha-1) so the endpoint singularity is exact
    const double s0 = std::exp2(std::floor(std::log2(1.0 / t_final)));
    {
        const auto rule = quad::gauss_jacobi(nodes_per_panel, 0.0, alpha - 1.0);
        const double half = 0.5 * s0;
        const double scale = std::pow(half, alpha) * inv_gamma;
        for (int i = 0; i < nodes_per_panel; ++i) {
            soe.exponents.push_back(half * (1.0 + rule.nodes[i]));
            soe.weights.push_back(scale * rule.weights[i]);
        }
    }

    // dyadic panels [s0 2^k, s0 2^k+1] until e^(-s delta) kills the tail
    const double s_max =
        (2.0 / delta) * (std::log(1.0 / epsilon) + alpha * std::log(2.0 / delta) + 1.0);
    const auto rule = quad::gauss_legendre(nodes_per_panel);
    for (double lo = s0; lo < s_max; lo *= 2.0) {
        const double mid = 1.5 * lo;
        const double half = 0.5 * lo;
        for (int i = 0; i < nodes_per_panel; ++i) {
            const double s = mid + half * rule.nodes[i];
            soe.exponents.push_back(s);
            soe.weights.push_back(half * rule.weights[i] *
                                  std::pow(s, alpha - 1.0) * inv_gamma);
        }
    }
    return soe;
}

}  // namespace

SoeApproximation build_soe(double alpha, double epsilon, double delta, double t_final) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(Errc::order_out_of_range, "kernel exponent outside (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error(Errc::invalid_tolerance, "tolerance must lie in (0, 1)");
    if (!(delta > 0.0) || !(delta < t_final))
        throw Error(Errc::invalid_window, "need 0 < delta < t_final");

    int nodes = std::clamp(
        static_cast<int>(std::ceil(0.75 * std::log(1.0 / epsilon))) + 4, 8, 64);
    for (int attempt = 0; attempt < 2; ++attempt) {
        SoeApproximation soe = assemble(alpha, epsilon, delta, t_final, nodes);
        if (validate_soe(soe, 10000) <= epsilon) return soe;
        nodes += nodes / 2 + 2;
    }
    throw Error(Errc::tolerance_not_met,
                "exponential sum failed to reach the requested tolerance");
}

double eval_soe(const SoeApproximation& soe, double t) {
    if (!(t > 0.0))
        throw Error(Errc::non_positive_time, "exponential sum defined for t > 0");
    // compensated summation keeps the noise floor near one rounding unit
    // of the result even with hundreds of terms
    double acc = 0.0, carry = 0.0;
    for (std::size_t j = 0; j < soe.weights.size(); ++j) {
        const double term = soe.weights[j] * std::exp(-soe.exponents[j] * t);
        const double y = term - carry;
        const double next = acc + y;
        carry = (next - acc) - y;
        acc = next;
    }
    return acc;
}

double validate_soe(const SoeApproximation& soe, std::size_t samples) {
    if (samples < 2)
        throw Error(Errc::bad_config, "need at least two validation samples");
    const double ratio = soe.t_final / soe.delta;
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double t = (i + 1 == samples) ? soe.t_final : soe.delta * std::pow(ratio, frac);
        const double err = std::abs(std::pow(t, -soe.alpha) - eval_soe(soe, t));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace fracsde
