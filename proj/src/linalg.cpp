#include "triosc/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace triosc {

SymmetricEigen jacobi_eigen(const Mat3& input, double tol, int max_sweeps) {
    Mat3 a = 0.5 * (input + input.transpose());
    Mat3 v = Mat3::Identity();
    const double norm = a.norm();
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        const double off = std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
        if (off <= tol * norm || off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a(p, q) == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                Mat3 g = Mat3::Identity();
                g(p, p) = c;
                g(q, q) = c;
                g(p, q) = s;
                g(q, p) = -s;
                a = g.transpose() * a * g;
                a(p, q) = a(q, p) = 0.0;
                v = v * g;
            }
        }
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
    SymmetricEigen out;
    out.sweeps = sweep;
    for (int k = 0; k < 3; ++k) {
        out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

double max_offdiagonal(const Mat3& a) {
    return std::max({std::abs(a(0, 1)), std::abs(a(0, 2)), std::abs(a(1, 2)), std::abs(a(1, 0)),
                     std::abs(a(2, 0)), std::abs(a(2, 1))});
}

Mat3 rotation_x1(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

Mat3 rotation_x2(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

Mat3 rotation_x3(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

}  // namespace triosc
