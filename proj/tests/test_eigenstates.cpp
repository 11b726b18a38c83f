#include "triosc/eigenstates.hpp"
#include "triosc/errors.hpp"
#include "triosc/hermite.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace triosc;

namespace {

struct Setup {
    SystemParameters params;
    AuxiliarySolution aux;
    Diagonalization diag;
};

Setup make_setup(const SystemParameters& p) {
    AuxiliarySolution aux = solve_auxiliary(p);
    const GammaBuild gb = build_gamma(p, aux);
    Diagonalization d = diagonalize(gb.gamma);
    return Setup{p, std::move(aux), d};
}

EigenFrame frame_of(const Setup& s) {
    const SystemParameters* p = &s.params;
    const AuxiliarySolution* a = &s.aux;
    return make_frame(s.diag, p->hbar, p->M, [p, a](double t) { return coefficients_at(*p, *a, t); });
}

SystemParameters static_unit() {
    SystemParameters p;
    p.grid = {0.0, 10.0, 256};
    return p;
}

SystemParameters coupled_family() {
    ScaledFamilySpec s;
    s.c = {1.0, 2.0, 4.0};
    s.base_mass = ParameterCurve::sinusoid(1.0, 0.2, 0.05, 0.5);
    s.damping = ParameterCurve::constant(0.1);
    s.d0 = {0.15, 0.1, 0.05};
    s.grid = {0.0, 30.0, 2048};
    return make_scaled_family(s);
}

}  // namespace

TEST_CASE("hermite: functions match the standard library Hermite polynomials") {
    for (double xi : {-3.2, -0.7, 0.0, 0.4, 2.9, 5.5}) {
        const HermiteFunctions h = hermite_functions(12, xi);
        for (unsigned n = 0; n <= 12; ++n) {
            const double norm = std::sqrt(std::ldexp(1.0, static_cast<int>(n)) * std::tgamma(n + 1.0) *
                                          std::sqrt(std::numbers::pi));
            const double ref = std::hermite(n, xi) * std::exp(-0.5 * xi * xi) / norm;
            CHECK(h.values[n] == doctest::Approx(ref).epsilon(1e-12).scale(1e-3));
        }
        CHECK_FALSE(h.underflow);
    }
    const HermiteFunctions far = hermite_functions(4, 40.0);
    CHECK(far.underflow);
    CHECK(far.values[4] == 0.0);
}

TEST_CASE("hermite: Gauss-Hermite moments") {
    const GaussHermiteRule g = gauss_hermite(20);
    REQUIRE(g.nodes.size() == 20);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0, m38 = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = g.nodes[i], w = g.weights[i];
        m0 += w;
        m2 += w * x * x;
        m4 += w * std::pow(x, 4);
        m38 += w * std::pow(x, 38);
        if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
        CHECK(x == doctest::Approx(-g.nodes[g.nodes.size() - 1 - i]).epsilon(1e-14));
    }
    const double sp = std::sqrt(std::numbers::pi);
    CHECK(m0 == doctest::Approx(sp).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-14));
    CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-14));
    CHECK(m38 == doctest::Approx(std::tgamma(19.5)).epsilon(1e-11));
}

TEST_CASE("eigenstates: mode enumeration") {
    const auto modes = modes_up_to(3);
    CHECK(modes.size() == 20);
    CHECK(modes.front() == ModeIndex{0, 0, 0});
    CHECK(modes[1] == ModeIndex{1, 0, 0});
    CHECK(modes.back() == ModeIndex{0, 0, 3});
    CHECK(modes_up_to(0).size() == 1);
}

TEST_CASE("eigenstates: static unit oscillators reduce to the harmonic oscillator") {
    const Setup s = make_setup(static_unit());
    const EigenFrame f = frame_of(s);
    CHECK(eigenvalue({0, 0, 0}, f) == doctest::Approx(1.5));
    CHECK(eigenvalue({2, 0, 1}, f) == doctest::Approx(4.5));
    const std::array<double, 3> x{0.3, -0.8, 1.1};
    const WavefunctionSample u = original_eigenfunction({0, 0, 0}, f, x, 2.0);
    const double r2 = 0.09 + 0.64 + 1.21;
    CHECK(std::abs(u.value) == doctest::Approx(std::pow(std::numbers::pi, -0.75) * std::exp(-0.5 * r2)).epsilon(1e-12));
    const WavefunctionSample u1 = original_eigenfunction({1, 0, 0}, f, x, 2.0);
    CHECK(std::abs(u1.value) == doctest::Approx(std::sqrt(2.0) * 0.3 * std::abs(u.value)).epsilon(1e-12));
}

TEST_CASE("eigenstates: analytic gradient matches finite differences") {
    const Setup s = make_setup(coupled_family());
    const EigenFrame f = frame_of(s);
    const std::array<double, 3> x{0.4, -0.2, 0.3};
    const ModeIndex n{1, 2, 0};
    const auto g = original_gradient(n, f, x, 7.0);
    for (int k = 0; k < 3; ++k) {
        auto xp = x, xm = x;
        const double h = 1e-5;
        xp[static_cast<std::size_t>(k)] += h;
        xm[static_cast<std::size_t>(k)] -= h;
        const cplx fd =
            (original_eigenfunction(n, f, xp, 7.0).value - original_eigenfunction(n, f, xm, 7.0).value) / (2 * h);
        CHECK(std::abs(fd - g[static_cast<std::size_t>(k)]) < 1e-8);
    }
}

TEST_CASE("eigenstates: quadrature checks on a coupled family") {
    const Setup s = make_setup(coupled_family());
    const EigenFrame f = frame_of(s);
    const auto modes = modes_up_to(3);
    const Quadrature q(f, 12.0, 24, 12);
    CHECK(max_identity_deviation(gram_matrix(q, modes)) < 1e-8);
    for (const auto& m : modes) CHECK(expectation_of_invariant(m, q) == doctest::Approx(eigenvalue(m, f)).epsilon(1e-9));
    for (int j = 0; j < 3; ++j) {
        const LadderCheck lc = ladder_check(j, q, {2, 1, 3});
        CHECK(std::abs(lc.projection - lc.expected) < 1e-8);
        CHECK(lc.remainder < 1e-8);
        CHECK(lc.expected == doctest::Approx(std::sqrt(j == 0 ? 2.0 : j == 1 ? 1.0 : 3.0)));
    }
    const LadderCheck vac = ladder_check(1, q, {0, 0, 0});
    CHECK(std::abs(vac.projection) < 1e-10);
    CHECK(commutator_deviation(q, modes_up_to(2)) < 1e-7);
}

TEST_CASE("eigenstates: quadrature preconditions") {
    const Setup s = make_setup(static_unit());
    const EigenFrame f = frame_of(s);
    CHECK_THROWS_AS(Quadrature(f, 0.0, 10, 12), Error);
    const Quadrature q(f, 0.0, 17, 12);
    CHECK_THROWS_AS((void)expectation_of_invariant({13, 0, 0}, q), Error);

    EigenFrame bad = f;
    bad.coefficients = [](double t) {
        InvariantCoefficients c;
        c.t = t;
        c.alpha = {1.0, -1.0, 1.0};
        return c;
    };
    try {
        (void)original_eigenfunction({0, 0, 0}, bad, {0.0, 0.0, 0.0}, 0.0);
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("eigenstates: grid residual converges at second order") {
    const Setup s = make_setup(coupled_family());
    const EigenFrame f = frame_of(s);
    GridSpec coarse;
    coarse.points = 16;
    GridSpec fine;
    fine.points = 31;
    const GridResidual rc = grid_operator_residual({0, 0, 0}, f, 5.0, coarse);
    const GridResidual rf = grid_operator_residual({0, 0, 0}, f, 5.0, fine);
    CHECK(rc.spacing_max / rf.spacing_max == doctest::Approx(2.0));
    CHECK(rc.residual / rf.residual == doctest::Approx(4.0).epsilon(0.1));

    GridSpec wrong = fine;
    wrong.lambda = eigenvalue({0, 0, 0}, f) + 0.1;
    CHECK(grid_operator_residual({0, 0, 0}, f, 5.0, wrong).residual > 2.0 * rf.residual);

    GridSpec tight = coarse;
    tight.extent = 2.0;
    try {
        (void)grid_operator_residual({0, 0, 0}, f, 5.0, tight);
        FAIL("expected a containment error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::containment);
    }
}

TEST_CASE("eigenstates: slice layout") {
    const Setup s = make_setup(static_unit());
    const EigenFrame f = frame_of(s);
    SliceSpec spec;
    spec.points = 5;
    spec.half_width = 2.0;
    const auto rows = wavefunction_slice({0, 0, 0}, f, 1.0, spec);
    REQUIRE(rows.size() == 25);
    CHECK(rows.front().x[0] == doctest::Approx(-2.0));
    CHECK(rows[12].x[0] == doctest::Approx(0.0));
    CHECK(std::abs(rows[12].value) == doctest::Approx(std::pow(std::numbers::pi, -0.75)));
}
