#pragma once

#include <cstddef>
#include <vector>

namespace triosc::fd {

// Central first derivative of uniformly spaced samples at index i.
// order 2, 4 or 6; needs order/2 neighbours on each side.
inline double central_derivative(const std::vector<double>& f, std::size_t i, double h, int order) {
    switch (order) {
    case 2:
        return (f[i + 1] - f[i - 1]) / (2.0 * h);
    case 4:
        return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    default:
        return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
                f[i + 3]) /
               (60.0 * h);
    }
}

}  // namespace triosc::fd
