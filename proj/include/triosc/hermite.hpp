// hermite.hpp — normalized Hermite functions and Gauss-Hermite quadrature.
#pragma once

#include <vector>

namespace triosc {

// psi_n(xi) = (2^n n! sqrt(pi))^{-1/2} H_n(xi) exp(-xi^2/2) for n = 0..n_max,
// by the normalized three-term recurrence. Beyond the exponent cutoff all
// values are returned as 0 and `underflow` is set.
struct HermiteFunctions {
    std::vector<double> values;
    bool underflow{false};
};

HermiteFunctions hermite_functions(int n_max, double xi);

// Same recurrence without the Gaussian factor: psi_n(xi) exp(xi^2/2).
std::vector<double> hermite_polynomials_normalized(int n_max, double xi);

// Nodes and weights for integrals of f(x) exp(-x^2) over the real line.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int order);

}  // namespace triosc
