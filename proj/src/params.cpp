#include "triosc/params.hpp"

#include "triosc/dynamics.hpp"
#include "triosc/errors.hpp"
#include "triosc/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace triosc {

namespace {

void check_index(int j) {
    if (j < 0 || j > 2) fail(ErrorKind::validation, "oscillator index out of range: " + std::to_string(j));
}

void check_window(const SystemParameters& p, double t) {
    if (!p.grid.contains(t)) {
        fail(ErrorKind::domain, "t=" + std::to_string(t) + " outside the configured window");
    }
}

// K_jk whose inverse is proportional to d_jk.
double coupling_kernel(const SystemParameters& p, const AuxiliaryState& s, int pair, double t) {
    const int spectator = pair_spectator(pair);
    const double ms = p.mass(spectator, t).value;
    double k = ms;
    for (int j = 0; j < 3; ++j) k *= s.rho[static_cast<std::size_t>(j)];
    return k * s.rho[static_cast<std::size_t>(spectator)];
}

void require_positive_rho(const AuxiliaryState& s, double t) {
    for (double r : s.rho) {
        if (!(r > 0.0)) fail(ErrorKind::singularity, "rho <= 0 at t=" + std::to_string(t));
    }
}

}  // namespace

void SystemParameters::validate() const {
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const std::string tag = " of oscillator " + std::to_string(j + 1);
        if (!(alpha0[sj] > 0.0) || !std::isfinite(alpha0[sj])) fail(ErrorKind::validation, "alpha0 must be > 0" + tag);
        if (!(Omega[sj] > 0.0) || !std::isfinite(Omega[sj])) fail(ErrorKind::validation, "Omega must be > 0" + tag);
        if (!std::isfinite(d0[sj])) fail(ErrorKind::validation, "coupling seed must be finite");
        if (rho0[sj] && !(*rho0[sj] > 0.0)) fail(ErrorKind::validation, "rho0 must be > 0" + tag);
        if (rhodot0[sj] && !std::isfinite(*rhodot0[sj])) fail(ErrorKind::validation, "rhodot0 must be finite" + tag);
        const double mmin = m[sj].min_on(grid.lower(), grid.upper(), 4 * grid.intervals);
        if (!(mmin > 0.0)) fail(ErrorKind::validation, "mass must be strictly positive on the window" + tag);
    }
    if (!(hbar > 0.0)) fail(ErrorKind::validation, "hbar must be > 0");
    if (!(M > 0.0)) fail(ErrorKind::validation, "M must be > 0");
    if (grid.intervals < 16) fail(ErrorKind::validation, "grid resolution N must be >= 16");
    if (!(grid.t1 > grid.t0)) fail(ErrorKind::validation, "time window must satisfy t1 > t0");
}

CurveSample SystemParameters::mass(int j, double t) const {
    check_index(j);
    check_window(*this, t);
    return m[static_cast<std::size_t>(j)].eval(t);
}

CurveSample SystemParameters::damping(int j, double t) const {
    check_index(j);
    check_window(*this, t);
    return b[static_cast<std::size_t>(j)].eval(t);
}

CurveSample SystemParameters::frequency(int j, double t) const {
    check_index(j);
    check_window(*this, t);
    return omega[static_cast<std::size_t>(j)].eval(t);
}

double modified_frequency_sq(const SystemParameters& params, int j, double t) {
    const CurveSample m = params.mass(j, t);
    const CurveSample b = params.damping(j, t);
    const CurveSample w = params.frequency(j, t);
    return w.value * w.value - b.value * b.value - b.derivative - b.value * m.derivative / m.value;
}

Couplings derive_couplings(const SystemParameters& params, const AuxiliarySolution& aux, double t) {
    const double t0 = aux.grid().t0;
    const AuxiliaryState s0 = aux.sample(0);
    const AuxiliaryState s = aux.at(t);
    require_positive_rho(s0, t0);
    require_positive_rho(s, t);
    Couplings d{};
    for (int pair = 0; pair < 3; ++pair) {
        const auto sp = static_cast<std::size_t>(pair);
        if (params.d0[sp] == 0.0) continue;
        d[sp] = params.d0[sp] * coupling_kernel(params, s0, pair, t0) / coupling_kernel(params, s, pair, t);
    }
    return d;
}

Couplings couplings_at(const SystemParameters& params, const AuxiliarySolution& aux, double t) {
    if (params.coupling_mode == CouplingMode::frozen) return params.d0;
    return derive_couplings(params, aux, t);
}

GRates g_rates(const SystemParameters& params, const AuxiliarySolution& aux, double t) {
    const AuxiliaryState s = aux.at(t);
    require_positive_rho(s, t);
    std::array<double, 3> r{}, lm{};
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        r[sj] = s.rhodot[sj] / s.rho[sj];
        const CurveSample m = params.mass(j, t);
        lm[sj] = m.derivative / m.value;
    }
    GRates g;
    g.g12 = lm[2] + r[0] + r[1] + 2.0 * r[2];
    g.g13 = lm[1] + r[0] + 2.0 * r[1] + r[2];
    g.g23 = lm[0] + 2.0 * r[0] + r[1] + r[2];
    g.g12_alt = lm[0] + 3.0 * r[0] + r[1];
    g.g13_alt = lm[0] + 3.0 * r[0] + r[2];
    return g;
}

double check_g_form_consistency(const SystemParameters& params, const AuxiliarySolution& aux) {
    const TimeGrid& grid = aux.grid();
    double worst = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const GRates g = g_rates(params, aux, grid.at(k));
        worst = std::max({worst, std::abs(g.g12 - g.g12_alt), std::abs(g.g13 - g.g13_alt)});
    }
    return worst;
}

AdmissibilityReport validate_admissibility(const SystemParameters& params,
                                           const AuxiliarySolution& aux,
                                           const AdmissibilityOptions& options) {
    const TimeGrid& grid = aux.grid();
    const int n = grid.size();
    AdmissibilityReport report;
    report.tolerance = options.tolerance;
    report.coupling_tolerance = options.coupling_tolerance;
    report.alpha_m.reserve(static_cast<std::size_t>(n));

    std::array<std::vector<double>, 3> d_series;
    std::array<std::vector<double>, 3> g_series;
    for (auto& v : d_series) v.resize(static_cast<std::size_t>(n));
    for (auto& v : g_series) v.resize(static_cast<std::size_t>(n));

    for (int k = 0; k < n; ++k) {
        const double t = grid.at(k);
        const AuxiliaryState s = aux.sample(k);
        std::array<double, 3> am{};
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            am[sj] = params.alpha0[sj] * s.rho[sj] * s.rho[sj] * params.mass(j, t).value;
            if (modified_frequency_sq(params, j, t) < 0.0) report.negative_modified_frequency = true;
        }
        const double spread = (std::abs(am[0] - am[1]) + std::abs(am[0] - am[2])) / am[0];
        report.max_alpha_m_violation = std::max(report.max_alpha_m_violation, spread);
        report.alpha_m.push_back(am);

        const Couplings d = couplings_at(params, aux, t);
        const GRates g = g_rates(params, aux, t);
        const std::array<double, 3> gs{g.g12, g.g13, g.g23};
        for (int pair = 0; pair < 3; ++pair) {
            const auto sp = static_cast<std::size_t>(pair);
            d_series[sp][static_cast<std::size_t>(k)] = d[sp];
            g_series[sp][static_cast<std::size_t>(k)] = gs[sp];
        }
    }

    // d' + G d = 0, fourth-order central differences at interior points.
    const double h = grid.step();
    for (int pair = 0; pair < 3; ++pair) {
        const auto sp = static_cast<std::size_t>(pair);
        if (params.d0[sp] == 0.0) continue;
        for (int k = 2; k + 2 < n; ++k) {
            const auto sk = static_cast<std::size_t>(k);
            const double dd = fd::central_derivative(d_series[sp], sk, h, 4);
            const double res = std::abs(dd + g_series[sp][sk] * d_series[sp][sk]) /
                               std::abs(d_series[sp][sk]);
            report.max_coupling_residual = std::max(report.max_coupling_residual, res);
        }
    }

    report.pass = report.max_alpha_m_violation <= options.tolerance &&
                  report.max_coupling_residual <= options.coupling_tolerance;
    return report;
}

SystemParameters make_scaled_family(const ScaledFamilySpec& spec) {
    for (double c : spec.c) {
        if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::validation, "scaled family requires c_j > 0");
    }
    SystemParameters p;
    p.grid = spec.grid;
    p.d0 = spec.d0;
    p.hbar = spec.hbar;
    p.M = spec.M;
    for (std::size_t j = 0; j < 3; ++j) {
        p.m[j] = spec.base_mass.scaled(spec.c[j]);
        p.omega[j] = spec.frequency;
        p.b[j] = spec.damping;
        p.Omega[j] = spec.Omega;
        p.alpha0[j] = spec.alpha0;
    }

    double rho = 0.0;
    if (spec.rho0) {
        rho = *spec.rho0;
    } else {
        SystemParameters base = p;
        base.m[0] = spec.base_mass;
        rho = ermakov_fixed_point(base, 0, spec.grid.t0);
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const double s = std::sqrt(spec.c[j]);
        p.rho0[j] = rho / s;
        p.rhodot0[j] = spec.rhodot0 / s;
    }
    return p;
}

}  // namespace triosc
