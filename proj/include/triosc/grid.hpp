#pragma once

#include <cmath>

namespace triosc {

// Uniform time grid t_k = t0 + k (t1 - t0) / intervals, k = 0..intervals.
// t1 < t0 is allowed (backward integration).
struct TimeGrid {
    double t0{0.0};
    double t1{1.0};
    int intervals{2048};

    double step() const noexcept { return (t1 - t0) / intervals; }
    int size() const noexcept { return intervals + 1; }
    double at(int k) const noexcept {
        return k == intervals ? t1 : t0 + step() * k;
    }
    double lower() const noexcept { return t0 < t1 ? t0 : t1; }
    double upper() const noexcept { return t0 < t1 ? t1 : t0; }
    bool contains(double t) const noexcept {
        const double slack = 1e-12 * std::fmax(1.0, upper() - lower());
        return t >= lower() - slack && t <= upper() + slack;
    }
    TimeGrid reversed() const noexcept { return {t1, t0, intervals}; }
    TimeGrid refined(int factor) const noexcept { return {t0, t1, intervals * factor}; }
};

}  // namespace triosc
