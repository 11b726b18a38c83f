#include "generators.hpp"

#include "triosc/errors.hpp"
#include "triosc/invariant.hpp"
#include "triosc/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace triosc;

namespace {

Vec3 oracle_values(const GammaMatrix& g) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(g.matrix());
    const Vec3 v = es.eigenvalues();  // increasing
    return {v(2), v(1), v(0)};
}

double offdiag(const Mat3& a) {
    return std::max({std::abs(a(0, 1)), std::abs(a(0, 2)), std::abs(a(1, 2))});
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::contract;
}

}  // namespace

TEST_CASE("spectrum: two-argument arctangent convention") {
    CHECK(atan2v(1.0, 0.0) == 0.0);
    CHECK(atan2v(0.0, 1.0) == doctest::Approx(std::numbers::pi / 2));
    CHECK(atan2v(-1.0, 0.0) == doctest::Approx(std::numbers::pi));
    CHECK(atan2v(-1.0, -1e-300) == doctest::Approx(std::numbers::pi));  // -pi maps to +pi
    CHECK(std::tan(atan2v(0.3, -0.7)) == doctest::Approx(-0.7 / 0.3));
}

TEST_CASE("spectrum: Jacobi eigensolver") {
    gen::Rng r(11);
    for (int i = 0; i < 50; ++i) {
        const GammaMatrix g = gen::gamma(r);
        const SymmetricEigen e = jacobi_eigen(g.matrix());
        const Vec3 ref = oracle_values(g);
        for (int k = 0; k < 3; ++k) CHECK(e.values(k) == doctest::Approx(ref(k)).epsilon(1e-13));
        const Mat3 back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        CHECK((back - g.matrix()).cwiseAbs().maxCoeff() < 1e-13 * g.norm());
    }
}

TEST_CASE("spectrum: closed-form eigenvalues") {
    GammaMatrix g;
    g.w0sq = {2.0, 1.0, 0.5};
    g.Delta = {0.0, 0.0, 0.0};
    auto e = closed_form_eigenvalues(g);
    CHECK(e.values[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.w0sq == doctest::Approx(3.5));

    g.w0sq = {1.0, 1.0, 1.0};
    e = closed_form_eigenvalues(g);
    CHECK(e.fallback);
    CHECK(e.values[1] == doctest::Approx(1.0));

    // Two equal diagonal entries coupled by D12: 1 +- D12 and 1.
    g.Delta = {0.25, 0.0, 0.0};
    e = closed_form_eigenvalues(g);
    CHECK_FALSE(e.fallback);
    CHECK(e.values[0] == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[2] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("spectrum: rotations") {
    gen::Rng r(3);
    for (int i = 0; i < 100; ++i) {
        const EulerAngles a = gen::angles(r);
        const Mat3 R = rotation_matrix(a);
        CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((composite_rotation(a) - R).cwiseAbs().maxCoeff() < 1e-14);
        const Mat3 back = rotation_matrix(angles_from_rotation(R));
        CHECK((back - R).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Gimbal lock: theta = pi/2 leaves only phi + varphi or phi - varphi determined.
    EulerAngles lock;
    lock.phi = 0.4;
    lock.theta = std::numbers::pi / 2;
    lock.varphi = -1.1;
    const Mat3 R = rotation_matrix(lock);
    CHECK((rotation_matrix(angles_from_rotation(R)) - R).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rotation_x3(0.3) * rotation_x3(-0.3) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectrum: transformed Gamma formulas match the matrix product") {
    gen::Rng r(5);
    for (int i = 0; i < 100; ++i) {
        const GammaMatrix g = gen::gamma(r);
        const EulerAngles a = gen::angles(r);
        const TransformedGamma tg = transformed_gamma(g, a);
        const Mat3 R = rotation_matrix(a);
        const Mat3 direct = R.transpose() * g.matrix() * R;
        CHECK(tg.max_mismatch < 1e-12 * g.norm());
        CHECK(tg.w_bar_sq[0] == doctest::Approx(direct(0, 0)).epsilon(1e-12));
        CHECK(tg.delta_bar[2] == doctest::Approx(direct(1, 2)).epsilon(1e-12).scale(g.norm()));
    }
}

TEST_CASE("spectrum: Euler angles diagonalize and pick one class") {
    gen::Rng r(17);
    int class1 = 0, class2 = 0;
    for (int i = 0; i < 300; ++i) {
        const GammaMatrix g = gen::gamma(r);
        const ClosedFormEigenvalues e = closed_form_eigenvalues(g);
        const EulerSolution s = euler_angles(g, e);
        const Mat3 R = rotation_matrix(s.angles);
        const Mat3 d = R.transpose() * g.matrix() * R;
        INFO("matrix " << i);
        CHECK(offdiag(d) <= 1e-9 * g.norm());
        const int passing = (s.class_residual[0] <= s.tolerance) + (s.class_residual[1] <= s.tolerance);
        CHECK(passing == 1);
        (s.angles.cls == GammaClass::class1 ? class1 : class2) += 1;

        const AngleSetReport sets = alternative_angle_sets(g, e);
        REQUIRE(sets.sets.size() == 6);
        for (std::size_t k = 0; k < 6; ++k) {
            const Mat3 Rk = rotation_matrix(sets.sets[k]);
            CHECK(offdiag(Rk.transpose() * g.matrix() * Rk) <= 1e-9 * g.norm());
            CHECK(sets.opposite_class_residuals[k] > 1e-9 * g.norm());
        }
    }
    CHECK(class1 > 50);
    CHECK(class2 > 50);
}

TEST_CASE("spectrum: equal diagonal entries and isotropic Gamma") {
    GammaMatrix g;
    g.w0sq = {1.0, 1.0, 2.0};
    g.Delta = {0.0, 0.3, 0.3};
    const Diagonalization d = diagonalize(g);
    CHECK(d.offdiag_residual <= 1e-9 * g.norm());

    GammaMatrix iso;
    iso.w0sq = {1.5, 1.5, 1.5};
    CHECK(kind_of([&] { (void)euler_angles(iso, closed_form_eigenvalues(iso)); }) == ErrorKind::degeneracy);
    const Diagonalization di = diagonalize(iso);
    CHECK(di.eigensolver_fallback);
    CHECK(di.angles.set_id == -1);
    CHECK(di.R.determinant() == doctest::Approx(1.0));
}

TEST_CASE("spectrum: positive definiteness") {
    GammaMatrix g;
    g.w0sq = {1.0, 1.0, 1.0};
    g.Delta = {0.5, 0.5, 0.5};
    CHECK(positive_definite(g));
    g.Delta = {0.9, -0.9, 0.9};
    CHECK_FALSE(positive_definite(g));
}

TEST_CASE("spectrum: Gamma from a scaled family is constant") {
    ScaledFamilySpec s;
    s.c = {1.0, 2.0, 4.0};
    s.base_mass = ParameterCurve::sinusoid(1.0, 0.2, 0.05, 0.0);
    s.damping = ParameterCurve::constant(0.1);
    s.d0 = {0.15, 0.1, 0.05};
    s.grid = {0.0, 40.0, 2048};
    SystemParameters p = make_scaled_family(s);
    AuxiliarySolution aux = solve_auxiliary(p);
    const GammaBuild gb = build_gamma(p, aux);
    CHECK(gb.constancy.max_drift < 1e-8);
    CHECK(gb.gamma.w0sq[0] == doctest::Approx(1.0));
    const InvariantCoefficients c = coefficients_at(p, aux, 0.0);
    CHECK(gb.gamma.Delta[pair13] == doctest::Approx(c.delta[pair13] * std::sqrt(c.alpha[0] * c.alpha[2])));

    p.coupling_mode = CouplingMode::frozen;
    aux = solve_auxiliary(p);
    CHECK(kind_of([&] { (void)build_gamma(p, aux); }) == ErrorKind::inadmissible);
    CHECK_FALSE(sample_gamma(p, aux).constancy.pass);
}

TEST_CASE("properties: spectral invariants of random Gamma") {
    gen::Rng r(23);
    for (int i = 0; i < 500; ++i) {
        const GammaMatrix g = gen::gamma(r);
        const ClosedFormEigenvalues e = closed_form_eigenvalues(g);
        const Vec3 ref = oracle_values(g);
        const double radius = std::max(std::abs(ref(0)), std::abs(ref(2)));
        CHECK(e.values[0] >= e.values[1]);
        CHECK(e.values[1] >= e.values[2]);
        const double tr = g.w0sq[0] + g.w0sq[1] + g.w0sq[2];
        CHECK(e.values[0] + e.values[1] + e.values[2] == doctest::Approx(tr).epsilon(1e-13));
        const double sq = e.values[0] * e.values[0] + e.values[1] * e.values[1] + e.values[2] * e.values[2];
        CHECK(sq == doctest::Approx(g.norm() * g.norm()).epsilon(1e-12));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(e.values[static_cast<std::size_t>(k)] - ref(k)) <= 1e-10 * radius);
    }
}
