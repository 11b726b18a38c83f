// curve.hpp — differentiable scalar functions of time used for m_j, b_j, omega_j.
#pragma once

#include <array>
#include <vector>

namespace triosc {

struct CurveSample {
    double value{0.0};
    double derivative{0.0};
};

class ParameterCurve {
public:
    enum class Kind { constant, linear, exponential, sinusoid, tabulated };

    // Zero constant.
    ParameterCurve() = default;

    static ParameterCurve constant(double c);
    static ParameterCurve linear(double c0, double slope);
    // c0 * exp(rate * t)
    static ParameterCurve exponential(double c0, double rate);
    // offset + amplitude * sin(angular_frequency * t + phase)
    static ParameterCurve sinusoid(double offset, double amplitude,
                                   double angular_frequency, double phase);
    // Natural cubic spline through (knots, values); knots strictly increasing, >= 4.
    static ParameterCurve tabulated(std::vector<double> knots,
                                    std::vector<double> values);

    Kind kind() const noexcept { return kind_; }

    // Throws ErrorKind::domain for tabulated curves outside the knot span.
    CurveSample eval(double t) const;
    double value(double t) const { return eval(t).value; }

    // Same curve multiplied by a constant factor.
    ParameterCurve scaled(double factor) const;

    // Smallest sampled value on [t0, t1] (analytic minimum where available).
    double min_on(double t0, double t1, int samples) const;

    // Raw payload, exposed for serialization and tests.
    const std::array<double, 4>& payload() const noexcept { return p_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    Kind kind_{Kind::constant};
    std::array<double, 4> p_{};
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> second_;  // spline second derivatives at knots
};

CurveSample eval_curve(const ParameterCurve& curve, double t);

}  // namespace triosc
