#include "triosc/hermite.hpp"

#include "triosc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace triosc {

namespace {

constexpr double exp_cutoff = 700.0;

void recurrence(int n_max, double xi, double seed, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(n_max + 1), 0.0);
    out[0] = seed;
    if (n_max >= 1) out[1] = std::sqrt(2.0) * xi * seed;
    for (int n = 1; n < n_max; ++n) {
        const auto sn = static_cast<std::size_t>(n);
        out[sn + 1] = std::sqrt(2.0 / (n + 1)) * xi * out[sn] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[sn - 1];
    }
}

}  // namespace

HermiteFunctions hermite_functions(int n_max, double xi) {
    if (n_max < 0) fail(ErrorKind::validation, "Hermite order must be >= 0");
    HermiteFunctions h;
    const double e = 0.5 * xi * xi;
    if (e > exp_cutoff) {
        h.values.assign(static_cast<std::size_t>(n_max + 1), 0.0);
        h.underflow = true;
        return h;
    }
    recurrence(n_max, xi, std::pow(std::numbers::pi, -0.25) * std::exp(-e), h.values);
    return h;
}

std::vector<double> hermite_polynomials_normalized(int n_max, double xi) {
    if (n_max < 0) fail(ErrorKind::validation, "Hermite order must be >= 0");
    std::vector<double> out;
    recurrence(n_max, xi, std::pow(std::numbers::pi, -0.25), out);
    return out;
}

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) fail(ErrorKind::validation, "Gauss-Hermite order must be >= 1");
    const int n = order;
    GaussHermiteRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // Initial guesses for the largest roots first.
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[a] = z;
        rule.nodes[b] = -z;
        rule.weights[a] = 2.0 / (pp * pp);
        rule.weights[b] = rule.weights[a];
    }
    // Ascending order.
    std::vector<double> x(rule.nodes.rbegin(), rule.nodes.rend());
    std::vector<double> w(rule.weights.rbegin(), rule.weights.rend());
    rule.nodes = std::move(x);
    rule.weights = std::move(w);
    return rule;
}

}  // namespace triosc
