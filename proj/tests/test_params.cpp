#include "generators.hpp"

#include "triosc/dynamics.hpp"
#include "triosc/errors.hpp"
#include "triosc/params.hpp"

#include <doctest.h>

#include <cmath>

using namespace triosc;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::contract;
}

SystemParameters identical_static(int intervals = 512) {
    SystemParameters p;
    p.grid = {0.0, 20.0, intervals};
    return p;
}

}  // namespace

TEST_CASE("curves: values and derivatives") {
    const auto s = ParameterCurve::sinusoid(1.0, 0.2, 0.5, 0.3);
    const auto v = s.eval(2.0);
    CHECK(v.value == doctest::Approx(1.0 + 0.2 * std::sin(1.3)).epsilon(1e-15));
    CHECK(v.derivative == doctest::Approx(0.1 * std::cos(1.3)).epsilon(1e-15));
    const auto e = ParameterCurve::exponential(2.0, -0.1).eval(3.0);
    CHECK(e.derivative == doctest::Approx(-0.1 * e.value));
    CHECK(ParameterCurve::linear(1.0, 0.5).scaled(2.0).value(2.0) == doctest::Approx(4.0));
}

TEST_CASE("curves: tabulated spline") {
    CHECK_THROWS_WITH(ParameterCurve::tabulated({0, 1, 2}, {1, 1, 1}), doctest::Contains(">= 4 knots required"));
    CHECK(kind_of([] { (void)ParameterCurve::tabulated({0, 1, 1, 2}, {1, 1, 1, 1}); }) == ErrorKind::validation);
    // A natural spline reproduces straight lines exactly.
    const auto c = ParameterCurve::tabulated({0, 1, 2.5, 4}, {1, 1.5, 2.25, 3});
    CHECK(c.value(1.7) == doctest::Approx(1.85).epsilon(1e-14));
    CHECK(c.eval(3.1).derivative == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(kind_of([&] { (void)c.value(4.5); }) == ErrorKind::domain);
}

TEST_CASE("params: validation") {
    SystemParameters p = identical_static();
    CHECK_NOTHROW(p.validate());
    p.m[1] = ParameterCurve::sinusoid(0.5, 0.6, 1.0, 0.0);
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    p = identical_static();
    p.alpha0[2] = 0.0;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    p = identical_static(8);
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    ScaledFamilySpec s;
    s.c = {1.0, -2.0, 1.0};
    CHECK(kind_of([&] { (void)make_scaled_family(s); }) == ErrorKind::validation);
}

TEST_CASE("params: modified frequency") {
    SystemParameters p = identical_static();
    p.m[0] = ParameterCurve::exponential(1.0, 0.1);
    p.b[0] = ParameterCurve::linear(0.2, 0.01);
    p.omega[0] = ParameterCurve::constant(1.5);
    const double t = 3.0, b = 0.2 + 0.01 * t;
    CHECK(modified_frequency_sq(p, 0, t) == doctest::Approx(2.25 - b * b - 0.01 - b * 0.1).epsilon(1e-14));
}

TEST_CASE("dynamics: Ermakov fixed point and static solution") {
    SystemParameters p = identical_static();
    p.m[0] = ParameterCurve::constant(2.0);
    p.omega[0] = ParameterCurve::constant(0.7);
    p.Omega[0] = 1.3;
    const double rho = std::pow(1.3 * 1.3 / (4.0 * 4.0 * 0.49), 0.25);
    CHECK(ermakov_fixed_point(p, 0, 0.0) == doctest::Approx(rho).epsilon(1e-15));
    const AuxiliarySolution aux = solve_auxiliary(p);
    for (int k = 0; k < aux.grid().size(); k += 37) {
        CHECK(aux.sample(k).rho[0] == doctest::Approx(rho).epsilon(1e-12));
        CHECK(std::abs(aux.sample(k).rhodot[0]) < 1e-12);
    }
    p.omega[1] = ParameterCurve::constant(0.1);
    p.b[1] = ParameterCurve::constant(0.2);
    CHECK(kind_of([&] { (void)ermakov_fixed_point(p, 1, 0.0); }) == ErrorKind::no_fixed_point);
}

TEST_CASE("dynamics: Ermakov solution off the fixed point") {
    // m = omega = 1, b = 0, Omega = 2: rho^2 = A cos^2 t + B sin^2 t + 2C sin t cos t with AB - C^2 = 1.
    SystemParameters p = identical_static(2048);
    p.rho0 = {1.5, 1.0, 1.0};
    p.rhodot0 = {0.0, 0.0, 0.0};
    const AuxiliarySolution aux = solve_auxiliary(p);
    const double A = 2.25, B = 1.0 / A;
    for (int k = 0; k < aux.grid().size(); k += 101) {
        const double t = aux.grid().at(k);
        const double exact = std::sqrt(A * std::cos(t) * std::cos(t) + B * std::sin(t) * std::sin(t));
        CHECK(aux.sample(k).rho[0] == doctest::Approx(exact).epsilon(1e-7));
    }
    CHECK(max_ermakov_residual(p, aux, 0) < 1e-6);
}

TEST_CASE("dynamics: momentum relation p = m (x' - b x)") {
    SystemParameters p = identical_static();
    p.m[0] = ParameterCurve::constant(2.0);
    p.b[0] = ParameterCurve::constant(0.3);
    CHECK(momentum_from_velocity(p, 0, 1.0, 0.5, 1.2) == doctest::Approx(2.0 * (1.2 - 0.15)));
    CHECK(velocity_from_momentum(p, 0, 1.0, 0.5, momentum_from_velocity(p, 0, 1.0, 0.5, 1.2)) ==
          doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("dynamics: damped oscillator against the exact solution") {
    SystemParameters p = identical_static(2048);
    for (auto& b : p.b) b = ParameterCurve::constant(0.3);
    const double w = std::sqrt(1.0 - 0.09);
    const AuxiliarySolution aux = solve_auxiliary(p);
    ClassicalState s0;
    s0.x = {1.0, -0.5, 0.2};
    s0.p = {0.0, 0.4, -1.0};
    const Trajectory tr = integrate_classical(p, aux, s0);
    for (std::size_t k = 0; k < tr.states.size(); k += 97) {
        const double t = tr.states[k].t;
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const double v0 = s0.p[sj] + 0.3 * s0.x[sj];
            const double x = s0.x[sj] * std::cos(w * t) + v0 / w * std::sin(w * t);
            CHECK(tr.states[k].x[sj] == doctest::Approx(x).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("dynamics: backward integration retraces the forward path") {
    SystemParameters p = make_scaled_family([] {
        ScaledFamilySpec s;
        s.c = {1.0, 2.0, 3.0};
        s.base_mass = ParameterCurve::sinusoid(1.0, 0.1, 0.1, 0.0);
        s.d0 = {0.1, 0.05, 0.02};
        s.grid = {0.0, 10.0, 1024};
        return s;
    }());
    const AuxiliarySolution aux = solve_auxiliary(p);
    ClassicalState s0;
    s0.x = {0.3, 0.1, -0.2};
    s0.p = {0.0, 0.5, 0.1};
    const Trajectory fwd = integrate_classical(p, aux, s0);
    const Trajectory back = integrate_classical(p, aux, fwd.states.back(), p.grid.reversed());
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        CHECK(back.states.back().x[sj] == doctest::Approx(s0.x[sj]).epsilon(1e-8).scale(1.0));
        CHECK(back.states.back().p[sj] == doctest::Approx(s0.p[sj]).epsilon(1e-8).scale(1.0));
    }
    ClassicalState wrong = s0;
    wrong.t = 1.0;
    CHECK(kind_of([&] { (void)integrate_classical(p, aux, wrong); }) == ErrorKind::contract);
}

TEST_CASE("dynamics: constant parameters conserve the Hamiltonian") {
    SystemParameters p = identical_static(1024);
    p.m = {ParameterCurve::constant(1.0), ParameterCurve::constant(2.0), ParameterCurve::constant(4.0)};
    p.d0 = {0.1, 0.05, 0.02};
    p.coupling_mode = CouplingMode::frozen;
    const AuxiliarySolution aux = solve_auxiliary(p);
    ClassicalState s0;
    s0.x = {1.0, 0.0, -1.0};
    s0.p = {0.0, 1.0, 0.5};
    const Trajectory tr = integrate_classical(p, aux, s0);
    const double h0 = hamiltonian_value(p, aux, tr.states.front());
    for (const auto& s : tr.states) CHECK(hamiltonian_value(p, aux, s) == doctest::Approx(h0).epsilon(1e-9));
}

TEST_CASE("params: scaled family is admissible") {
    ScaledFamilySpec s;
    s.c = {1.0, 2.0, 4.0};
    s.base_mass = ParameterCurve::sinusoid(1.0, 0.2, 0.05, 0.0);
    s.damping = ParameterCurve::constant(0.1);
    s.d0 = {0.15, 0.1, 0.05};
    s.grid = {0.0, 30.0, 2048};
    const SystemParameters p = make_scaled_family(s);
    const AuxiliarySolution aux = solve_auxiliary(p);
    const AdmissibilityReport adm = validate_admissibility(p, aux);
    CHECK(adm.pass);
    CHECK(adm.max_alpha_m_violation < 1e-10);
    CHECK(adm.max_coupling_residual < 1e-6);
    CHECK(check_g_form_consistency(p, aux) < 1e-8);

    // rho_j sqrt(c_j) follows the base oscillator, solved independently.
    SystemParameters base = p;
    base.m = {s.base_mass, s.base_mass, s.base_mass};
    base.rho0 = {};
    base.rhodot0 = {};
    const AuxiliarySolution ref = solve_auxiliary(base);
    for (int k = 0; k < aux.grid().size(); k += 53) {
        for (int j = 0; j < 3; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            CHECK(aux.sample(k).rho[sj] * std::sqrt(s.c[sj]) == doctest::Approx(ref.sample(k).rho[0]).epsilon(1e-9));
        }
    }

    // d12 m3 rho1 rho2 rho3^2 is conserved by the derived couplings.
    auto k12 = [&](int k) {
        const double t = aux.grid().at(k);
        const auto a = aux.sample(k);
        return derive_couplings(p, aux, t)[pair12] * p.mass(2, t).value * a.rho[0] * a.rho[1] * a.rho[2] * a.rho[2];
    };
    CHECK(k12(aux.grid().size() - 1) == doctest::Approx(k12(0)).epsilon(1e-12));
}

TEST_CASE("params: violations are reported") {
    ScaledFamilySpec s;
    s.c = {1.0, 2.0, 4.0};
    s.base_mass = ParameterCurve::sinusoid(1.0, 0.2, 0.05, 0.0);
    s.grid = {0.0, 30.0, 1024};
    SystemParameters p = make_scaled_family(s);
    p.alpha0[1] = 1.1;
    AuxiliarySolution aux = solve_auxiliary(p);
    const AdmissibilityReport adm = validate_admissibility(p, aux);
    CHECK_FALSE(adm.pass);
    CHECK(adm.max_alpha_m_violation == doctest::Approx(0.1).epsilon(1e-9));

    p = make_scaled_family(s);
    p.rho0[2] = *p.rho0[2] * 1.05;
    aux = solve_auxiliary(p);
    CHECK(check_g_form_consistency(p, aux) > 1e-4);

    p = make_scaled_family(s);
    p.d0 = {0.1, 0.1, 0.1};
    p.coupling_mode = CouplingMode::frozen;
    aux = solve_auxiliary(p);
    CHECK(validate_admissibility(p, aux).max_coupling_residual > 1e-3);
}

TEST_CASE("properties: random scaled families stay admissible") {
    gen::Rng r(7);
    for (int i = 0; i < 12; ++i) {
        const ScaledFamilySpec s = gen::scaled_family(r);
        const SystemParameters p = make_scaled_family(s);
        const AuxiliarySolution aux = solve_auxiliary(p);
        const AdmissibilityReport adm = validate_admissibility(p, aux);
        INFO("family " << i);
        CHECK(adm.max_alpha_m_violation < 1e-8);
        CHECK(adm.max_coupling_residual < 1e-6);
        CHECK(check_g_form_consistency(p, aux) < 1e-8);
        CHECK(adm.pass);
    }
}
