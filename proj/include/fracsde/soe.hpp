#pragma once

#include <cstddef>
#include <vector>

#include "fracsde/core.hpp"

namespace fracsde {

/// Sum-of-exponentials surrogate for the kernel t^(-alpha):
/// t^(-alpha) ~ sum_j weight_j * exp(-exponent_j * t), uniformly within
/// epsilon for t in [delta, t_final].
struct SoeApproximation {
    double alpha = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double t_final = 0.0;
    std::vector<double> weights;
    std::vector<double> exponents;

    std::size_t term_count() const noexcept { return weights.size(); }
};

/// Build the surrogate by discretising t^(-a) = 1/Gamma(a) int_0^inf
/// e^(-st) s^(a-1) ds: a Gauss-Jacobi panel near s = 0 plus composite
/// Gauss-Legendre panels on dyadic intervals up to an epsilon-dependent
/// cutoff.  Internally validated; retries once with more nodes per panel
/// before reporting ToleranceNotMet.  Absolute tolerances below roughly
/// delta^(-alpha) * 1e-14 sit under the double-precision noise floor and
/// cannot be certified.
SoeApproximation build_soe(double alpha, double epsilon, double delta, double t_final);

/// Evaluate the exponential sum at t > 0.
double eval_soe(const SoeApproximation& soe, double t);

/// Max absolute deviation |t^(-alpha) - eval_soe(t)| over `samples`
/// log-spaced points spanning [delta, t_final].
double validate_soe(const SoeApproximation& soe, std::size_t samples);

}  // namespace fracsde
