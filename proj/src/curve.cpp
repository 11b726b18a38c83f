#include "triosc/curve.hpp"

#include "triosc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace triosc {

namespace {

void require_finite(std::initializer_list<double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            fail(ErrorKind::validation, std::string(what) + ": non-finite payload");
        }
    }
}

// Natural cubic spline second derivatives (tridiagonal solve, Thomas algorithm).
std::vector<double> natural_spline_second(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
    // interior equations: h_{i-1} m_{i-1} + 2(h_{i-1}+h_i) m_i + h_i m_{i+1} = rhs_i
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        const double rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    return m;
}

}  // namespace

ParameterCurve ParameterCurve::constant(double c) {
    require_finite({c}, "constant curve");
    ParameterCurve out;
    out.kind_ = Kind::constant;
    out.p_ = {c, 0.0, 0.0, 0.0};
    return out;
}

ParameterCurve ParameterCurve::linear(double c0, double slope) {
    require_finite({c0, slope}, "linear curve");
    ParameterCurve out;
    out.kind_ = Kind::linear;
    out.p_ = {c0, slope, 0.0, 0.0};
    return out;
}

ParameterCurve ParameterCurve::exponential(double c0, double rate) {
    require_finite({c0, rate}, "exponential curve");
    ParameterCurve out;
    out.kind_ = Kind::exponential;
    out.p_ = {c0, rate, 0.0, 0.0};
    return out;
}

ParameterCurve ParameterCurve::sinusoid(double offset, double amplitude,
                                        double angular_frequency, double phase) {
    require_finite({offset, amplitude, angular_frequency, phase}, "sinusoid curve");
    ParameterCurve out;
    out.kind_ = Kind::sinusoid;
    out.p_ = {offset, amplitude, angular_frequency, phase};
    return out;
}

ParameterCurve ParameterCurve::tabulated(std::vector<double> knots,
                                         std::vector<double> values) {
    if (knots.size() != values.size()) {
        fail(ErrorKind::validation, "tabulated curve: knots and values differ in length");
    }
    if (knots.size() < 4) {
        fail(ErrorKind::validation, "tabulated curve: >= 4 knots required");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require_finite({knots[i], values[i]}, "tabulated curve");
        if (i > 0 && !(knots[i] > knots[i - 1])) {
            fail(ErrorKind::validation, "tabulated curve: knots must be strictly increasing");
        }
    }
    ParameterCurve out;
    out.kind_ = Kind::tabulated;
    out.second_ = natural_spline_second(knots, values);
    out.knots_ = std::move(knots);
    out.values_ = std::move(values);
    return out;
}

CurveSample ParameterCurve::eval(double t) const {
    switch (kind_) {
    case Kind::constant:
        return {p_[0], 0.0};
    case Kind::linear:
        return {p_[0] + p_[1] * t, p_[1]};
    case Kind::exponential: {
        const double v = p_[0] * std::exp(p_[1] * t);
        return {v, p_[1] * v};
    }
    case Kind::sinusoid: {
        const double arg = p_[2] * t + p_[3];
        return {p_[0] + p_[1] * std::sin(arg), p_[1] * p_[2] * std::cos(arg)};
    }
    case Kind::tabulated: {
        const double lo = knots_.front();
        const double hi = knots_.back();
        const double slack = 1e-12 * std::max(1.0, hi - lo);
        if (!(t >= lo - slack && t <= hi + slack)) {
            fail(ErrorKind::domain, "tabulated curve evaluated outside its knot span at t=" +
                                        std::to_string(t));
        }
        const double tc = std::clamp(t, lo, hi);
        auto it = std::upper_bound(knots_.begin(), knots_.end(), tc);
        std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
        i = std::clamp<std::size_t>(i, 1, knots_.size() - 1);
        const std::size_t k = i - 1;
        const double h = knots_[i] - knots_[k];
        const double a = (knots_[i] - tc) / h;
        const double b = (tc - knots_[k]) / h;
        const double v = a * values_[k] + b * values_[i] +
                         ((a * a * a - a) * second_[k] + (b * b * b - b) * second_[i]) * h * h / 6.0;
        const double dv = (values_[i] - values_[k]) / h -
                          (3.0 * a * a - 1.0) / 6.0 * h * second_[k] +
                          (3.0 * b * b - 1.0) / 6.0 * h * second_[i];
        return {v, dv};
    }
    }
    return {};
}

ParameterCurve ParameterCurve::scaled(double factor) const {
    ParameterCurve out = *this;
    switch (kind_) {
    case Kind::constant:
    case Kind::linear:
    case Kind::exponential:
        out.p_[0] *= factor;
        if (kind_ == Kind::linear) {
            out.p_[1] *= factor;
        }
        break;
    case Kind::sinusoid:
        out.p_[0] *= factor;
        out.p_[1] *= factor;
        break;
    case Kind::tabulated:
        for (auto& v : out.values_) v *= factor;
        for (auto& v : out.second_) v *= factor;
        break;
    }
    return out;
}

double ParameterCurve::min_on(double t0, double t1, int samples) const {
    if (kind_ == Kind::sinusoid &&
        std::abs(p_[2]) * (t1 - t0) >= 2.0 * std::numbers::pi) {
        return p_[0] - std::abs(p_[1]);
    }
    double best = std::min(value(t0), value(t1));
    const int n = std::max(samples, 2);
    for (int k = 1; k < n; ++k) {
        best = std::min(best, value(t0 + (t1 - t0) * k / n));
    }
    if (kind_ == Kind::tabulated) {
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (knots_[i] >= t0 && knots_[i] <= t1) best = std::min(best, values_[i]);
        }
    }
    return best;
}

CurveSample eval_curve(const ParameterCurve& curve, double t) {
    return curve.eval(t);
}

}  // namespace triosc
