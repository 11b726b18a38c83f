#include "triosc/spectrum.hpp"

#include "triosc/errors.hpp"
#include "triosc/invariant.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace triosc {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a + 0.0;  // drop negative zero
}

double clamped_sqrt(double radicand, double scale, const char* name) {
    if (radicand >= 0.0) return std::sqrt(radicand);
    if (radicand >= -1e-12 * scale) return 0.0;
    fail(ErrorKind::formula_inconsistency,
         fmt::format("radicand of {} is negative ({:.3e}, scale {:.3e})", name, radicand, scale));
}

double partial_residual(const Mat3& g, double phi, double theta) {
    const Mat3 t = rotation_x1(phi) * rotation_x2(theta);
    const Mat3 p = t.transpose() * g * t;
    return std::max(std::abs(p(0, 2)), std::abs(p(1, 2)));
}

EulerAngles complete_angles(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double theta,
                            double varphi) {
    theta = wrap_angle(theta);
    varphi = wrap_angle(varphi);
    const auto [u, v] = phi_inputs(gamma, eig, theta, varphi);
    double phi = atan2v(u, v);
    if (std::cos(theta) < 0.0) phi += pi;
    EulerAngles a;
    a.phi = wrap_angle(phi);
    a.theta = theta;
    a.varphi = varphi;
    return a;
}

double offdiag_of(const Mat3& g, const EulerAngles& a) {
    const Mat3 r = rotation_matrix(a);
    return max_offdiagonal(r.transpose() * g * r);
}

// (theta, varphi) of the six diagonalizing sets for class sign s (+1 class 1, -1 class 2).
std::array<std::pair<double, double>, 6> candidate_sets(const AngleInputs& q, double s) {
    const double ut = q.u_theta, vt = q.v_theta, up = q.u_varphi, vp = q.v_varphi;
    return {{
        {atan2v(ut, vt), s * atan2v(up, vp)},
        {-s * atan2v(ut, vt), atan2v(up, -vp)},
        {s * atan2v(ut, vt), -atan2v(up, -vp)},
        {atan2v(ut, vt), s * atan2v(-up, -vp)},
        {atan2v(ut, -vt), atan2v(up, -s * vp)},
        {atan2v(-ut, vt), atan2v(-s * up, -vp)},
    }};
}

}  // namespace

Mat3 GammaMatrix::matrix() const {
    Mat3 g;
    g << w0sq[0], Delta[pair12], Delta[pair13], Delta[pair12], w0sq[1], Delta[pair23], Delta[pair13],
        Delta[pair23], w0sq[2];
    return g;
}

double GammaMatrix::norm() const { return matrix().norm(); }

GammaMatrix GammaMatrix::from_matrix(const Mat3& g, double M) {
    GammaMatrix out;
    out.w0sq = {g(0, 0), g(1, 1), g(2, 2)};
    out.Delta = {0.5 * (g(0, 1) + g(1, 0)), 0.5 * (g(0, 2) + g(2, 0)), 0.5 * (g(1, 2) + g(2, 1))};
    out.M = M;
    return out;
}

GammaBuild sample_gamma(const SystemParameters& params, const AuxiliarySolution& aux, double tolerance) {
    GammaBuild out;
    out.gamma.M = params.M;
    for (std::size_t j = 0; j < 3; ++j) {
        const double w = params.alpha0[j] * params.Omega[j];
        out.gamma.w0sq[j] = 0.25 * w * w;
    }
    const TimeGrid& grid = aux.grid();
    const InvariantCoefficients c0 = coefficients_at(params, aux, grid.at(0));
    for (int pair = 0; pair < 3; ++pair) {
        const auto [j, k] = pair_members(pair);
        out.gamma.Delta[static_cast<std::size_t>(pair)] =
            c0.delta[static_cast<std::size_t>(pair)] *
            std::sqrt(c0.alpha[static_cast<std::size_t>(j)] * c0.alpha[static_cast<std::size_t>(k)]);
    }
    const double norm = out.gamma.norm();
    std::array<double, 6> ref{};
    for (std::size_t i = 0; i < 3; ++i) {
        ref[i] = out.gamma.w0sq[i];
        ref[3 + i] = out.gamma.Delta[i];
    }
    auto& rep = out.constancy;
    rep.tolerance = tolerance;
    for (int n = 0; n < grid.size(); ++n) {
        const InvariantCoefficients c = coefficients_at(params, aux, grid.at(n));
        std::array<double, 6> now{};
        const auto ident = frequency_identity(c);
        for (std::size_t i = 0; i < 3; ++i) now[i] = ident[i];
        for (int pair = 0; pair < 3; ++pair) {
            const auto [j, k] = pair_members(pair);
            now[3 + static_cast<std::size_t>(pair)] =
                c.delta[static_cast<std::size_t>(pair)] *
                std::sqrt(c.alpha[static_cast<std::size_t>(j)] * c.alpha[static_cast<std::size_t>(k)]);
        }
        for (std::size_t i = 0; i < 6; ++i) {
            const double denom = std::abs(ref[i]) > 1e-14 * norm ? std::abs(ref[i]) : norm;
            rep.drift[i] = std::max(rep.drift[i], std::abs(now[i] - ref[i]) / denom);
        }
    }
    static const char* names[6] = {"omega01^2", "omega02^2", "omega03^2", "Delta12", "Delta13", "Delta23"};
    const auto worst = std::max_element(rep.drift.begin(), rep.drift.end());
    rep.max_drift = *worst;
    rep.worst_entry = names[worst - rep.drift.begin()];
    rep.pass = rep.max_drift <= tolerance;
    return out;
}

GammaBuild build_gamma(const SystemParameters& params, const AuxiliarySolution& aux, double tolerance) {
    GammaBuild out = sample_gamma(params, aux, tolerance);
    if (!out.constancy.pass) {
        fail(ErrorKind::inadmissible, fmt::format("Gamma entry {} drifts by {:.3e} (tolerance {:.1e})",
                                                  out.constancy.worst_entry, out.constancy.max_drift, tolerance));
    }
    return out;
}

ClosedFormEigenvalues closed_form_eigenvalues(const GammaMatrix& gamma) {
    const double w1 = gamma.w0sq[0], w2 = gamma.w0sq[1], w3 = gamma.w0sq[2];
    const double d12 = gamma.Delta[pair12], d13 = gamma.Delta[pair13], d23 = gamma.Delta[pair23];
    ClosedFormEigenvalues e;
    e.w0sq = w1 + w2 + w3;
    const double delta_sq = d12 * d12 + d13 * d13 + d23 * d23;
    e.Delta = std::sqrt(delta_sq);
    const double spread = (w1 - w2) * (w1 - w2) + (w1 - w3) * (w1 - w3) + (w2 - w3) * (w2 - w3);
    e.J = 2.0 * std::sqrt(spread + 6.0 * delta_sq);
    e.A = -3.0 * (w1 + w2) * (w1 + w3) * (w2 + w3) - 27.0 * (w1 * d23 * d23 + w2 * d13 * d13 + w3 * d12 * d12) +
          9.0 * e.w0sq * delta_sq + 2.0 * (w1 * w1 * w1 + w2 * w2 * w2 + w3 * w3 * w3) +
          18.0 * (w1 * w2 * w3 + 3.0 * d12 * d13 * d23);
    e.B = 0.5 * spread + 3.0 * delta_sq;

    const double norm = gamma.norm();
    if (e.B <= 1e-30 * norm * norm) {
        const SymmetricEigen je = jacobi_eigen(gamma.matrix());
        e.values = {je.values(0), je.values(1), je.values(2)};
        e.fallback = true;
        return e;
    }
    double arg = e.A / (2.0 * std::pow(e.B, 1.5));
    if (!(std::abs(arg) <= 1.0 + 1e-12)) {
        fail(ErrorKind::formula_inconsistency, fmt::format("arccos argument {:.17g} outside [-1, 1]", arg));
    }
    arg = std::clamp(arg, -1.0, 1.0);
    e.Theta = std::acos(arg) / 3.0;
    const double r = e.J / std::sqrt(2.0);
    e.values = {(e.w0sq + r * std::cos(e.Theta)) / 3.0, (e.w0sq + r * std::cos(e.Theta - 2.0 * pi / 3.0)) / 3.0,
                (e.w0sq + r * std::cos(e.Theta + 2.0 * pi / 3.0)) / 3.0};
    std::sort(e.values.begin(), e.values.end(), std::greater<>());
    return e;
}

double atan2v(double z1, double z2) {
    const double a = std::atan2(z2, z1);
    return a <= -pi ? pi : a + 0.0;
}

AngleInputs angle_inputs(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig) {
    const double a = gamma.w0sq[0];
    const double d12 = gamma.Delta[pair12], d13 = gamma.Delta[pair13];
    const double D = d12 * d12 + d13 * d13;
    const double l1 = eig.values[0], l2 = eig.values[1], l3 = eig.values[2];
    const double n = gamma.norm();
    const double s2 = n * n, s3 = n * n * n;
    AngleInputs q;
    q.u_theta = clamped_sqrt((l3 - a) * (l3 - l1 - l2 + a) - D, s2, "u_theta");
    q.v_theta = clamped_sqrt(a * a - (l1 + l2) * a + l1 * l2 + D, s2, "v_theta");
    q.u_varphi = clamped_sqrt((l2 - l3) * (a * a + l2 * (l3 - a) - l3 * a + D), s3, "u_varphi");
    q.v_varphi = -clamped_sqrt((l3 - l1) * (a * a + l1 * (l3 - a) - l3 * a + D), s3, "v_varphi");
    return q;
}

std::pair<double, double> phi_inputs(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double theta,
                                     double varphi) {
    const double a = gamma.w0sq[0];
    const double d12 = gamma.Delta[pair12], d13 = gamma.Delta[pair13];
    const double D = d12 * d12 + d13 * d13;
    const double l1 = eig.values[0], l2 = eig.values[1], l3 = eig.values[2];
    const double bracket = (l1 + l2) * (l3 - a) - l3 * l3 + a * a + D;
    const double lead = 2.0 * (l1 - l3) * (l2 - l3);
    const double st = std::sin(theta), s2f = std::sin(2.0 * varphi);
    const double u = lead * (l3 - a) * d13 * st - (l1 - l2) * bracket * d12 * s2f;
    const double v = lead * (a - l3) * d12 * st - (l1 - l2) * bracket * d13 * s2f;
    return {u, v};
}

EulerSolution euler_angles(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double rel_tol) {
    const double norm = gamma.norm();
    const auto& v = eig.values;
    const double gap = std::min(v[0] - v[1], v[1] - v[2]);
    if (gap < 1e-9 * norm) {
        fail(ErrorKind::degeneracy,
             fmt::format("eigenvalue gap {:.3e} below 1e-9 |Gamma|; use the eigensolver route", gap));
    }
    const Mat3 g = gamma.matrix();
    const AngleInputs q = angle_inputs(gamma, eig);
    const double theta = atan2v(q.u_theta, q.v_theta);

    EulerSolution out;
    out.tolerance = rel_tol * norm;
    std::array<EulerAngles, 2> cand{};
    for (int k = 0; k < 2; ++k) {
        const double s = k == 0 ? 1.0 : -1.0;
        cand[static_cast<std::size_t>(k)] = complete_angles(gamma, eig, theta, s * atan2v(q.u_varphi, q.v_varphi));
        out.class_residual[static_cast<std::size_t>(k)] =
            partial_residual(g, cand[static_cast<std::size_t>(k)].phi, cand[static_cast<std::size_t>(k)].theta);
    }
    int chosen = -1;
    if (out.class_residual[0] <= out.tolerance) {
        chosen = 0;
    } else if (out.class_residual[1] <= out.tolerance) {
        chosen = 1;
    }
    if (chosen < 0) {
        fail(ErrorKind::formula_inconsistency,
             fmt::format("neither sign passes the class test (residuals {:.3e}, {:.3e}; tolerance {:.3e})",
                         out.class_residual[0], out.class_residual[1], out.tolerance));
    }
    out.angles = cand[static_cast<std::size_t>(chosen)];
    out.angles.cls = chosen == 0 ? GammaClass::class1 : GammaClass::class2;
    out.angles.set_id = 0;
    out.offdiag_residual = offdiag_of(g, out.angles);
    if (out.offdiag_residual > out.tolerance) {
        fail(ErrorKind::formula_inconsistency,
             fmt::format("accepted angles leave off-diagonal {:.3e} (tolerance {:.3e})", out.offdiag_residual,
                         out.tolerance));
    }
    return out;
}

Mat3 rotation_matrix(const EulerAngles& a) {
    return rotation_x1(a.phi) * rotation_x2(a.theta) * rotation_x3(a.varphi);
}

Mat3 composite_rotation(const EulerAngles& a) {
    const double sp = std::sin(a.phi), cp = std::cos(a.phi);
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    const double sf = std::sin(a.varphi), cf = std::cos(a.varphi);
    Mat3 r;
    r << ct * cf, -ct * sf, st,                           //
        cp * sf + sp * st * cf, cp * cf - sp * st * sf, -sp * ct,  //
        sp * sf - cp * st * cf, sp * cf + cp * st * sf, cp * ct;
    return r;
}

TransformedGamma transformed_gamma(const GammaMatrix& gamma, const EulerAngles& a) {
    const double w1 = gamma.w0sq[0], w2 = gamma.w0sq[1], w3 = gamma.w0sq[2];
    const double D12 = gamma.Delta[pair12], D13 = gamma.Delta[pair13], D23 = gamma.Delta[pair23];
    const double sp = std::sin(a.phi), cp = std::cos(a.phi);
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    const double sf = std::sin(a.varphi), cf = std::cos(a.varphi);
    const double c2f = std::cos(2.0 * a.varphi), s2f = std::sin(2.0 * a.varphi);
    const double c2t = std::cos(2.0 * a.theta);
    const double s2p = std::sin(2.0 * a.phi), c2p = std::cos(2.0 * a.phi);

    TransformedGamma out;
    out.w_bar_sq[0] = w1 * ct * ct * cf * cf + w2 * std::pow(sp * st * cf + cp * sf, 2) +
                      w3 * std::pow(cp * st * cf - sp * sf, 2) +
                      2.0 * (D12 * ct * cf * (sp * st * cf + cp * sf) + D13 * ct * cf * (sp * sf - cp * st * cf) +
                             D23 * (st * cf * sf * (sp * sp - cp * cp) + cp * sp * (sf * sf - st * st * cf * cf)));
    out.w_bar_sq[1] = w1 * ct * ct * sf * sf + w2 * std::pow(cp * cf - sp * st * sf, 2) +
                      w3 * std::pow(sp * cf + cp * st * sf, 2) +
                      2.0 * (D12 * ct * sf * (sp * st * sf - cp * cf) - D13 * ct * sf * (cp * st * sf + sp * cf) +
                             D23 * (st * cf * sf * (cp * cp - sp * sp) + cp * sp * (cf * cf - st * st * sf * sf)));
    out.w_bar_sq[2] = w1 * st * st + w2 * sp * sp * ct * ct + w3 * cp * cp * ct * ct -
                      2.0 * (D12 * sp * st * ct - D13 * cp * ct * st + D23 * cp * sp * ct * ct);
    out.delta_bar[pair12] = -w1 * ct * ct * cf * sf + w2 * (cp * sp * st * c2f + cf * sf * (cp * cp - sp * sp * st * st)) -
                            w3 * (cp * sp * st * c2f + cf * sf * (cp * cp * st * st - sp * sp)) +
                            D12 * ct * (cp * c2f - 2.0 * sp * st * cf * sf) +
                            D13 * ct * (sp * (cf * cf - sf * sf) + cp * st * s2f) +
                            D23 * (st * c2f * (sp * sp - cp * cp) + 0.25 * (3.0 - c2t) * s2p * s2f);
    out.delta_bar[pair13] = w1 * ct * st * cf - w2 * sp * ct * (sp * st * cf + cp * sf) +
                            w3 * cp * ct * (sp * sf - cp * st * cf) -
                            D12 * (sp * ct * ct * cf - st * (sp * st * cf + cp * sf)) +
                            D13 * (cp * ct * ct * cf + st * (sp * sf - cp * st * cf)) +
                            D23 * ct * (s2p * st * cf + c2p * sf);
    out.delta_bar[pair23] = -w1 * ct * st * sf + w2 * sp * ct * (sp * st * sf - cp * cf) +
                            w3 * cp * ct * (sp * cf + cp * st * sf) + D12 * (cp * st * cf + sp * c2t * sf) +
                            D13 * (sp * st * cf - cp * c2t * sf) + D23 * ct * (cf * (cp * cp - sp * sp) - s2p * st * sf);

    const Mat3 r = rotation_matrix(a);
    out.direct = r.transpose() * gamma.matrix() * r;
    const std::array<double, 6> formula{out.w_bar_sq[0],  out.w_bar_sq[1],  out.w_bar_sq[2],
                                        out.delta_bar[0], out.delta_bar[1], out.delta_bar[2]};
    const std::array<double, 6> direct{out.direct(0, 0), out.direct(1, 1), out.direct(2, 2),
                                       out.direct(0, 1), out.direct(0, 2), out.direct(1, 2)};
    for (std::size_t i = 0; i < 6; ++i) out.max_mismatch = std::max(out.max_mismatch, std::abs(formula[i] - direct[i]));
    return out;
}

AngleSetReport alternative_angle_sets(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double rel_tol) {
    const EulerSolution primary = euler_angles(gamma, eig, rel_tol);
    const double s = primary.angles.cls == GammaClass::class1 ? 1.0 : -1.0;
    const Mat3 g = gamma.matrix();
    const AngleInputs q = angle_inputs(gamma, eig);
    AngleSetReport out;
    out.tolerance = primary.tolerance;
    const auto own = candidate_sets(q, s);
    const auto other = candidate_sets(q, -s);
    for (std::size_t i = 0; i < own.size(); ++i) {
        EulerAngles a = complete_angles(gamma, eig, own[i].first, own[i].second);
        a.cls = primary.angles.cls;
        a.set_id = static_cast<int>(i);
        out.sets.push_back(a);
        out.residuals.push_back(offdiag_of(g, a));
        const EulerAngles b = complete_angles(gamma, eig, other[i].first, other[i].second);
        out.opposite_class_residuals.push_back(offdiag_of(g, b));
    }
    for (std::size_t i = 0; i < out.sets.size(); ++i) {
        if (out.residuals[i] > out.tolerance) {
            fail(ErrorKind::formula_inconsistency,
                 fmt::format("angle set {} leaves off-diagonal {:.3e} (tolerance {:.3e})", i, out.residuals[i],
                             out.tolerance));
        }
    }
    return out;
}

bool positive_definite(const GammaMatrix& gamma) {
    const Mat3 g = gamma.matrix();
    const double m1 = g(0, 0);
    const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const double m3 = g.determinant();
    return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

EulerAngles angles_from_rotation(const Mat3& R) {
    EulerAngles a;
    a.set_id = -1;
    a.theta = std::asin(std::clamp(R(0, 2), -1.0, 1.0));
    const double ct = std::cos(a.theta);
    if (ct > 1e-12) {
        a.phi = atan2v(R(2, 2), -R(1, 2));
        a.varphi = atan2v(R(0, 0), -R(0, 1));
    } else {
        // Gimbal lock: only phi + varphi (or phi - varphi) is determined.
        a.varphi = 0.0;
        a.phi = atan2v(R(1, 1), R(2, 1));
    }
    return a;
}

Diagonalization diagonalize(const GammaMatrix& gamma, double rel_tol) {
    Diagonalization out;
    out.eig = closed_form_eigenvalues(gamma);
    const double norm = gamma.norm();
    const auto& v = out.eig.values;
    const bool degenerate = out.eig.fallback || std::min(v[0] - v[1], v[1] - v[2]) < 1e-9 * norm;
    const Mat3 g = gamma.matrix();
    if (degenerate) {
        const SymmetricEigen je = jacobi_eigen(g);
        Mat3 r = je.vectors;
        if (r.determinant() < 0.0) r.col(2) = -r.col(2);
        out.angles = angles_from_rotation(r);
        out.eigensolver_fallback = true;
    } else {
        out.angles = euler_angles(gamma, out.eig, rel_tol).angles;
    }
    out.R = rotation_matrix(out.angles);
    const Mat3 d = out.R.transpose() * g * out.R;
    out.offdiag_residual = max_offdiagonal(d);
    for (int k = 0; k < 3; ++k) {
        out.w_bar_sq[static_cast<std::size_t>(k)] = d(k, k);
        double best = INFINITY;
        for (int i = 0; i < 3; ++i) {
            const double diff = std::abs(d(k, k) - v[static_cast<std::size_t>(i)]);
            if (diff < best) {
                best = diff;
                out.permutation[static_cast<std::size_t>(k)] = i;
            }
        }
    }
    return out;
}

}  // namespace triosc
