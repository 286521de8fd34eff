#include "fracsde/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsde::quad {

namespace {

/// Value and derivative of the Jacobi polynomial P_n^(a,b) at x.
/// Derivative uses d/dx P_n^(a,b) = (n+a+b+1)/2 * P_(n-1)^(a+1,b+1).
double jacobi_value(int n, double a, double b, double x) {
    if (n == 0) return 1.0;
    double p_prev = 1.0;
    double p = 0.5 * ((a + b + 2.0) * x + (a - b));
    for (int k = 1; k < n; ++k) {
        const double k2ab = 2.0 * k + a + b;
        const double c1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * k2ab;
        const double c2 = (k2ab + 1.0) * (a * a - b * b);
        const double c3 = (k2ab + 1.0) * (k2ab + 2.0) * k2ab;
        const double c4 = 2.0 * (k + a) * (k + b) * (k2ab + 2.0);
        const double p_next = ((c2 + c3 * x) * p - c4 * p_prev) / c1;
        p_prev = p;
        p = p_next;
    }
    return p;
}

double jacobi_derivative(int n, double a, double b, double x) {
    if (n == 0) return 0.0;
    return 0.5 * (n + a + b + 1.0) * jacobi_value(n - 1, a + 1.0, b + 1.0, x);
}

}  // namespace

Rule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: need n >= 1");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("gauss_jacobi: need a, b > -1");

    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    // roots found largest-to-smallest by Newton with deflation against
    // the roots already located
    for (int k = 0; k < n; ++k) {
        double r = std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n));
        if (k > 0) r = 0.5 * (r + rule.nodes[k - 1]);
        for (int iter = 0; iter < 200; ++iter) {
            double defl = 0.0;
            for (int j = 0; j < k; ++j) defl += 1.0 / (r - rule.nodes[j]);
            const double value = jacobi_value(n, a, b, r);
            const double slope = jacobi_derivative(n, a, b, r);
            const double delta = -value / (slope - value * defl);
            r += delta;
            if (std::abs(delta) < 1e-15 * (1.0 + std::abs(r))) break;
        }
        rule.nodes[k] = r;
    }

    const double log_norm = (a + b + 1.0) * std::log(2.0) + std::lgamma(a + n + 1.0) +
                            std::lgamma(b + n + 1.0) - std::lgamma(n + 1.0) -
                            std::lgamma(a + b + n + 1.0);
    const double norm = std::exp(log_norm);
    for (int k = 0; k < n; ++k) {
        const double x = rule.nodes[k];
        const double dp = jacobi_derivative(n, a, b, x);
        rule.weights[k] = norm / ((1.0 - x * x) * dp * dp);
    }

    // ascending nodes
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        std::swap(rule.nodes[i], rule.nodes[j]);
        std::swap(rule.weights[i], rule.weights[j]);
    }
    return rule;
}

Rule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace fracsde::quad
