#pragma once

#include <vector>

namespace fracsde::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b,
/// a, b > -1.
Rule gauss_jacobi(int n, double a, double b);

}  // namespace fracsde::quad
