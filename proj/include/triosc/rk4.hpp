// rk4.hpp — classical fourth-order Runge–Kutta with a step-doubling error monitor.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace triosc {

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
struct DoubledStep {
    OdeState<N> y{};      // two half steps
    double error{0.0};    // Richardson estimate |y_half - y_full| / 15, scaled by max(1, |y|)
};

template <std::size_t N, class Rhs>
OdeState<N> rk4_step(const Rhs& f, double t, const OdeState<N>& y, double h) {
    auto axpy = [](const OdeState<N>& a, const OdeState<N>& k, double s) {
        OdeState<N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * k[i];
        return out;
    };
    const OdeState<N> k1 = f(t, y);
    const OdeState<N> k2 = f(t + 0.5 * h, axpy(y, k1, 0.5 * h));
    const OdeState<N> k3 = f(t + 0.5 * h, axpy(y, k2, 0.5 * h));
    const OdeState<N> k4 = f(t + h, axpy(y, k3, h));
    OdeState<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

// One grid interval: a full step and two half steps; the half-step result is kept.
template <std::size_t N, class Rhs>
DoubledStep<N> rk4_doubled_step(const Rhs& f, double t, const OdeState<N>& y, double h) {
    const OdeState<N> full = rk4_step<N>(f, t, y, h);
    const OdeState<N> mid = rk4_step<N>(f, t, y, 0.5 * h);
    DoubledStep<N> out;
    out.y = rk4_step<N>(f, t + 0.5 * h, mid, 0.5 * h);
    for (std::size_t i = 0; i < N; ++i) {
        const double e = std::abs(out.y[i] - full[i]) / 15.0 / std::max(1.0, std::abs(out.y[i]));
        out.error = std::max(out.error, e);
    }
    return out;
}

}  // namespace triosc
