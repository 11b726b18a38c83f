#include "triosc/invariant.hpp"

#include "triosc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace triosc {

InvariantCoefficients coefficients_at(const SystemParameters& params, const AuxiliarySolution& aux, double t) {
    const AuxiliaryState s = aux.at(t);
    InvariantCoefficients c;
    c.t = t;
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const double a0 = params.alpha0[sj];
        const double r = s.rho[sj];
        const double rd = s.rhodot[sj];
        const double m = params.mass(j, t).value;
        const double b = params.damping(j, t).value;
        const double om = params.Omega[sj];
        c.alpha[sj] = a0 * r * r;
        c.beta[sj] = a0 * m * (b * r * r - r * rd);
        c.gamma[sj] = a0 * (om * om / (4.0 * r * r) + m * m * (b * b * r * r - 2.0 * b * r * rd + rd * rd));
    }
    c.F = c.alpha[0] * params.mass(0, t).value;
    const Couplings d = couplings_at(params, aux, t);
    for (std::size_t k = 0; k < 3; ++k) c.delta[k] = c.F * d[k];
    return c;
}

std::array<double, 3> frequency_identity(const InvariantCoefficients& c) {
    std::array<double, 3> out{};
    for (std::size_t j = 0; j < 3; ++j) out[j] = c.alpha[j] * c.gamma[j] - c.beta[j] * c.beta[j];
    return out;
}

double LvnResidualReport::worst() const noexcept {
    return *std::max_element(max_residual.begin(), max_residual.end());
}

LvnResidualReport lvn_residuals(const SystemParameters& params, const AuxiliarySolution& aux,
                                double fd_step, double tolerance) {
    return lvn_residuals(
        params, [&](double t) { return coefficients_at(params, aux, t); },
        [&](double t) { return couplings_at(params, aux, t); }, aux.grid(), fd_step, tolerance);
}

LvnResidualReport lvn_residuals(const SystemParameters& params, const CoefficientFn& coefficients,
                                const CouplingFn& couplings, const TimeGrid& grid, double fd_step,
                                double tolerance) {
    const double s = fd_step > 0.0 ? fd_step : std::abs(grid.step());
    std::array<double, 6> raw{};
    std::array<double, 6> scale{};
    auto note = [](double& slot, std::initializer_list<double> terms) {
        for (double v : terms) slot = std::max(slot, std::abs(v));
    };

    for (int k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        if (!grid.contains(t - s) || !grid.contains(t + s)) continue;
        const InvariantCoefficients c = coefficients(t);
        const InvariantCoefficients cp = coefficients(t + s);
        const InvariantCoefficients cm = coefficients(t - s);
        const Couplings d = couplings(t);
        std::array<double, 3> m{}, b{}, w2{};
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            m[sj] = params.mass(j, t).value;
            b[sj] = params.damping(j, t).value;
            const double w = params.frequency(j, t).value;
            w2[sj] = w * w;
        }
        // Diagonal equations, maximised over j.
        for (std::size_t j = 0; j < 3; ++j) {
            const double da = (cp.alpha[j] - cm.alpha[j]) / (2.0 * s);
            const double db = (cp.beta[j] - cm.beta[j]) / (2.0 * s);
            const double dg = (cp.gamma[j] - cm.gamma[j]) / (2.0 * s);
            const double a1 = 2.0 * b[j] * c.alpha[j], a2 = 2.0 * c.beta[j] / m[j];
            const double b1 = m[j] * c.alpha[j] * w2[j], b2 = c.gamma[j] / m[j];
            const double g1 = 2.0 * b[j] * c.gamma[j], g2 = 2.0 * m[j] * c.beta[j] * w2[j];
            raw[0] = std::max(raw[0], std::abs(da - a1 + a2));
            raw[1] = std::max(raw[1], std::abs(db - b1 + b2));
            raw[2] = std::max(raw[2], std::abs(dg + g1 - g2));
            note(scale[0], {da, a1, a2});
            note(scale[1], {db, b1, b2});
            note(scale[2], {dg, g1, g2});
        }
        for (int pair = 0; pair < 3; ++pair) {
            const auto sp = static_cast<std::size_t>(pair);
            const auto [j, l] = pair_members(pair);
            const auto sj = static_cast<std::size_t>(j);
            const auto sl = static_cast<std::size_t>(l);
            const double dd = (cp.delta[sp] - cm.delta[sp]) / (2.0 * s);
            const double t1 = c.delta[sp] * (b[sj] + b[sl]);
            const double t2 = d[sp] * (c.beta[sj] + c.beta[sl]);
            raw[3 + sp] = std::max(raw[3 + sp], std::abs(dd + t1 - t2));
            note(scale[3 + sp], {dd, t1, t2});
        }
    }

    LvnResidualReport report;
    report.fd_step = s;
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < 6; ++i) {
        report.max_residual[i] = scale[i] > 0.0 ? raw[i] / scale[i] : raw[i];
    }
    report.pass = report.worst() <= tolerance;
    return report;
}

double classical_invariant_value(const InvariantCoefficients& c, const ClassicalState& s) {
    if (std::abs(c.t - s.t) > 1e-12 * std::max(1.0, std::abs(s.t))) {
        fail(ErrorKind::contract, "invariant coefficients and state refer to different times");
    }
    double v = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        v += 0.5 * (c.alpha[j] * s.p[j] * s.p[j] + 2.0 * c.beta[j] * s.x[j] * s.p[j] +
                    c.gamma[j] * s.x[j] * s.x[j]);
    }
    v += c.delta[pair12] * s.x[0] * s.x[1] + c.delta[pair13] * s.x[0] * s.x[2] +
         c.delta[pair23] * s.x[1] * s.x[2];
    return v;
}

DriftReport invariant_drift(const SystemParameters& params, const AuxiliarySolution& aux,
                            const Trajectory& trajectory) {
    DriftReport report;
    if (trajectory.states.empty()) return report;
    report.series.reserve(trajectory.states.size());
    const auto& first = trajectory.states.front();
    const double i0 = classical_invariant_value(coefficients_at(params, aux, first.t), first);
    report.absolute = i0 == 0.0;
    for (const auto& s : trajectory.states) {
        const double v = classical_invariant_value(coefficients_at(params, aux, s.t), s);
        const double drift = report.absolute ? std::abs(v - i0) : std::abs(v - i0) / std::abs(i0);
        report.max_drift = std::max(report.max_drift, drift);
        report.series.push_back({s.t, v, drift});
    }
    return report;
}

}  // namespace triosc
