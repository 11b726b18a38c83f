#include "triosc/dynamics.hpp"

#include "triosc/errors.hpp"
#include "triosc/finite_difference.hpp"
#include "triosc/rk4.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace triosc {

AuxiliarySolution::AuxiliarySolution(TimeGrid grid, std::array<AuxiliaryComponent, 3> components)
    : grid_(grid), comp_(std::move(components)) {
    for (const auto& c : comp_) {
        if (c.rho.size() != static_cast<std::size_t>(grid_.size()) || c.rhodot.size() != c.rho.size()) {
            fail(ErrorKind::contract, "auxiliary component does not match the grid");
        }
    }
}

AuxiliaryState AuxiliarySolution::sample(int k) const {
    AuxiliaryState s;
    for (std::size_t j = 0; j < 3; ++j) {
        s.rho[j] = comp_[j].rho.at(static_cast<std::size_t>(k));
        s.rhodot[j] = comp_[j].rhodot.at(static_cast<std::size_t>(k));
    }
    return s;
}

AuxiliaryState AuxiliarySolution::at(double t) const {
    if (!grid_.contains(t)) {
        fail(ErrorKind::domain, "auxiliary solution queried outside its grid at t=" + std::to_string(t));
    }
    const double h = grid_.step();
    double u = (t - grid_.t0) / h;
    int k = static_cast<int>(std::floor(u));
    k = std::clamp(k, 0, grid_.intervals - 1);
    const double s = std::clamp(u - k, 0.0, 1.0);
    if (s == 0.0) return sample(k);
    if (s == 1.0) return sample(k + 1);

    // Cubic Hermite on (rho, rho') at the interval ends.
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    const double d00 = 6.0 * s * (s - 1.0) / h;
    const double d10 = (1.0 - s) * (1.0 - 3.0 * s);
    const double d01 = -d00;
    const double d11 = s * (3.0 * s - 2.0);

    AuxiliaryState out;
    const auto i0 = static_cast<std::size_t>(k);
    const auto i1 = i0 + 1;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& c = comp_[j];
        out.rho[j] = h00 * c.rho[i0] + h10 * h * c.rhodot[i0] + h01 * c.rho[i1] + h11 * h * c.rhodot[i1];
        out.rhodot[j] = d00 * c.rho[i0] + d10 * c.rhodot[i0] + d01 * c.rho[i1] + d11 * c.rhodot[i1];
    }
    return out;
}

double AuxiliarySolution::max_step_error() const noexcept {
    return std::max({comp_[0].max_step_error, comp_[1].max_step_error, comp_[2].max_step_error});
}

namespace {

double ermakov_acceleration(const SystemParameters& p, int j, double t, double rho, double rhodot) {
    const CurveSample m = p.mass(j, t);
    const double wt2 = modified_frequency_sq(p, j, t);
    const double om = p.Omega[static_cast<std::size_t>(j)];
    return -(m.derivative / m.value) * rhodot - wt2 * rho +
           om * om / (4.0 * m.value * m.value * rho * rho * rho);
}

}  // namespace

AuxiliaryComponent solve_ermakov(const SystemParameters& params, int j, double rho0, double rhodot0,
                                 const TimeGrid& grid, const IntegratorOptions& options) {
    if (!(rho0 > 0.0)) fail(ErrorKind::validation, "rho0 must be > 0");
    if (!std::isfinite(rhodot0)) fail(ErrorKind::validation, "rhodot0 must be finite");

    const auto rhs = [&](double t, const OdeState<2>& y) -> OdeState<2> {
        if (!(y[0] > options.rho_min)) {
            fail(ErrorKind::singularity,
                 "rho_" + std::to_string(j + 1) + " reached rho_min near t=" + std::to_string(t));
        }
        return {y[1], ermakov_acceleration(params, j, t, y[0], y[1])};
    };

    AuxiliaryComponent out;
    const auto n = static_cast<std::size_t>(grid.size());
    out.rho.resize(n);
    out.rhodot.resize(n);
    OdeState<2> y{rho0, rhodot0};
    out.rho[0] = y[0];
    out.rhodot[0] = y[1];
    const double h = grid.step();
    for (int k = 0; k < grid.intervals; ++k) {
        const double t = grid.at(k);
        const DoubledStep<2> step = rk4_doubled_step<2>(rhs, t, y, h);
        y = step.y;
        out.max_step_error = std::max(out.max_step_error, step.error);
        if (!(y[0] > options.rho_min) || !std::isfinite(y[1])) {
            fail(ErrorKind::singularity,
                 "rho_" + std::to_string(j + 1) + " reached rho_min near t=" + std::to_string(grid.at(k + 1)));
        }
        if (step.error > options.step_tolerance) {
            fail(ErrorKind::accuracy, "Ermakov step error " + std::to_string(step.error) + " at t=" +
                                          std::to_string(t) + " exceeds tolerance; use a finer grid");
        }
        out.rho[static_cast<std::size_t>(k) + 1] = y[0];
        out.rhodot[static_cast<std::size_t>(k) + 1] = y[1];
    }
    return out;
}

double ermakov_fixed_point(const SystemParameters& params, int j, double t) {
    const double wt2 = modified_frequency_sq(params, j, t);
    if (!(wt2 > 0.0)) {
        fail(ErrorKind::no_fixed_point,
             "modified frequency squared is not positive for oscillator " + std::to_string(j + 1));
    }
    const double m = params.mass(j, t).value;
    const double om = params.Omega[static_cast<std::size_t>(j)];
    return std::pow(om * om / (4.0 * m * m * wt2), 0.25);
}

AuxiliarySolution solve_auxiliary(const SystemParameters& params, const IntegratorOptions& options) {
    params.validate();
    std::array<AuxiliaryComponent, 3> comps;
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const double rho0 = params.rho0[sj] ? *params.rho0[sj] : ermakov_fixed_point(params, j, params.grid.t0);
        const double rhodot0 = params.rhodot0[sj] ? *params.rhodot0[sj] : 0.0;
        comps[sj] = solve_ermakov(params, j, rho0, rhodot0, params.grid, options);
    }
    return AuxiliarySolution(params.grid, std::move(comps));
}

double max_ermakov_residual(const SystemParameters& params, const AuxiliarySolution& aux, int j) {
    const TimeGrid& grid = aux.grid();
    const AuxiliaryComponent& c = aux.component(j);
    const double h = grid.step();
    const double om = params.Omega[static_cast<std::size_t>(j)];
    const double scale = std::max(1.0, om * om);
    double worst = 0.0;
    for (int k = 3; k + 3 < grid.size(); ++k) {
        const auto sk = static_cast<std::size_t>(k);
        const double rhoddot = fd::central_derivative(c.rhodot, sk, h, 6);
        const double res = rhoddot - ermakov_acceleration(params, j, grid.at(k), c.rho[sk], c.rhodot[sk]);
        worst = std::max(worst, std::abs(res) / scale);
    }
    return worst;
}

double momentum_from_velocity(const SystemParameters& params, int j, double t, double x, double v) {
    return params.mass(j, t).value * (v - params.damping(j, t).value * x);
}

double velocity_from_momentum(const SystemParameters& params, int j, double t, double x, double p) {
    return p / params.mass(j, t).value + params.damping(j, t).value * x;
}

Trajectory integrate_classical(const SystemParameters& params, const AuxiliarySolution& aux,
                               const ClassicalState& state0, const TimeGrid& grid,
                               const IntegratorOptions& options) {
    if (std::abs(state0.t - grid.t0) > 1e-12 * std::max(1.0, std::abs(grid.t0))) {
        fail(ErrorKind::contract, "initial state time does not match the grid start");
    }

    // y = (x1, x2, x3, v1, v2, v3)
    const auto rhs = [&](double t, const OdeState<6>& y) -> OdeState<6> {
        const Couplings d = couplings_at(params, aux, t);
        OdeState<6> f{};
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const CurveSample m = params.mass(j, t);
            const double wt2 = modified_frequency_sq(params, j, t);
            double coupling = 0.0;
            for (int k = 0; k < 3; ++k) {
                if (k == j) continue;
                coupling += d[static_cast<std::size_t>(pair_of(j, k))] * y[static_cast<std::size_t>(k)];
            }
            f[sj] = y[sj + 3];
            f[sj + 3] = -(m.derivative / m.value) * y[sj + 3] - wt2 * y[sj] - coupling / m.value;
        }
        return f;
    };

    auto to_state = [&](double t, const OdeState<6>& y) {
        ClassicalState s;
        s.t = t;
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            s.x[sj] = y[sj];
            s.p[sj] = momentum_from_velocity(params, j, t, y[sj], y[sj + 3]);
        }
        return s;
    };

    OdeState<6> y{};
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        y[sj] = state0.x[sj];
        y[sj + 3] = velocity_from_momentum(params, j, grid.t0, state0.x[sj], state0.p[sj]);
    }

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(grid.size()));
    traj.states.push_back(to_state(grid.t0, y));
    const double h = grid.step();
    for (int k = 0; k < grid.intervals; ++k) {
        const DoubledStep<6> step = rk4_doubled_step<6>(rhs, grid.at(k), y, h);
        y = step.y;
        const double t = grid.at(k + 1);
        for (double v : y) {
            if (!std::isfinite(v)) fail(ErrorKind::divergence, "classical state diverged at t=" + std::to_string(t));
        }
        traj.max_step_error = std::max(traj.max_step_error, step.error);
        if (step.error > options.step_tolerance) {
            fail(ErrorKind::accuracy, "classical step error " + std::to_string(step.error) + " at t=" +
                                          std::to_string(t) + " exceeds tolerance; use a finer grid");
        }
        traj.states.push_back(to_state(t, y));
    }
    return traj;
}

Trajectory integrate_classical(const SystemParameters& params, const AuxiliarySolution& aux,
                               const ClassicalState& state0, const IntegratorOptions& options) {
    return integrate_classical(params, aux, state0, aux.grid(), options);
}

double hamiltonian_value(const SystemParameters& params, const AuxiliarySolution& aux,
                         const ClassicalState& s) {
    const Couplings d = couplings_at(params, aux, s.t);
    double h = 0.0;
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const double m = params.mass(j, s.t).value;
        const double b = params.damping(j, s.t).value;
        const double w = params.frequency(j, s.t).value;
        h += 0.5 * (s.p[sj] * s.p[sj] / m + 2.0 * b * s.x[sj] * s.p[sj] + m * w * w * s.x[sj] * s.x[sj]);
    }
    h += d[pair12] * s.x[0] * s.x[1] + d[pair13] * s.x[0] * s.x[2] + d[pair23] * s.x[1] * s.x[2];
    return h;
}

}  // namespace triosc
