#include "triosc/eigenstates.hpp"

#include "triosc/errors.hpp"
#include "triosc/hermite.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace triosc {

namespace {

constexpr cplx I1{0.0, 1.0};

void require_positive_alpha(const InvariantCoefficients& c) {
    for (double a : c.alpha) {
        if (!(a > 0.0)) fail(ErrorKind::domain, fmt::format("alpha <= 0 at t={}", c.t));
    }
}

void require_mode(const ModeIndex& n, int n_max) {
    for (int j = 0; j < 3; ++j) {
        if (n[j] < 0 || n[j] > n_max) {
            fail(ErrorKind::validation, fmt::format("mode index {} outside [0, {}]", n[j], n_max));
        }
    }
}

// xi_j at x, and d xi_j / d x_k.
std::array<double, 3> xi_of(const EigenFrame& f, const InvariantCoefficients& c, const std::array<double, 3>& x) {
    std::array<double, 3> y{};
    for (std::size_t k = 0; k < 3; ++k) y[k] = x[k] / std::sqrt(c.alpha[k]);
    std::array<double, 3> xi{};
    for (int j = 0; j < 3; ++j) {
        double X = 0.0;
        for (int k = 0; k < 3; ++k) X += f.R(k, j) * y[static_cast<std::size_t>(k)];
        xi[static_cast<std::size_t>(j)] = std::sqrt(f.wbar[static_cast<std::size_t>(j)] / f.hbar) * X;
    }
    return xi;
}

double dxi_dx(const EigenFrame& f, const InvariantCoefficients& c, int j, int k) {
    return std::sqrt(f.wbar[static_cast<std::size_t>(j)] / f.hbar) * f.R(k, j) / std::sqrt(c.alpha[static_cast<std::size_t>(k)]);
}

double amplitude(const EigenFrame& f, const InvariantCoefficients& c) {
    double a = 1.0;
    for (std::size_t j = 0; j < 3; ++j) a *= std::pow(f.wbar[j] / (f.hbar * c.alpha[j]), 0.25);
    return a;
}

cplx phase_factor(const EigenFrame& f, const InvariantCoefficients& c, const std::array<double, 3>& x) {
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k) s += c.beta[k] / c.alpha[k] * x[k] * x[k];
    return std::exp(-I1 * s / (2.0 * f.hbar));
}

// psi'_n from psi_{n-1}, psi_{n+1}; `p` holds indices 0..n+1.
double hermite_derivative(const std::vector<double>& p, int n) {
    const auto sn = static_cast<std::size_t>(n);
    const double lower = n > 0 ? std::sqrt(0.5 * n) * p[sn - 1] : 0.0;
    return lower - std::sqrt(0.5 * (n + 1)) * p[sn + 1];
}

// Builds (value, gradient) given per-axis Hermite tables that either include the
// Gaussian (psi) or not (scaled by `gauss`).
struct Evaluated {
    cplx value;
    std::array<cplx, 3> grad;
};

Evaluated evaluate(const ModeIndex& n, const EigenFrame& f, const InvariantCoefficients& c,
                   const std::array<const std::vector<double>*, 3>& tables, double scale,
                   const std::array<double, 3>& x) {
    std::array<double, 3> h{}, dh{};
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        h[sj] = (*tables[sj])[static_cast<std::size_t>(n[j])];
        dh[sj] = hermite_derivative(*tables[sj], n[j]);
    }
    const double prod = h[0] * h[1] * h[2];
    const cplx ph = phase_factor(f, c, x) * scale;
    Evaluated e;
    e.value = ph * prod;
    for (int k = 0; k < 3; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        double real_part = 0.0;
        real_part += dh[0] * h[1] * h[2] * dxi_dx(f, c, 0, k);
        real_part += h[0] * dh[1] * h[2] * dxi_dx(f, c, 1, k);
        real_part += h[0] * h[1] * dh[2] * dxi_dx(f, c, 2, k);
        const cplx chirp = -I1 * c.beta[sk] * x[sk] / (f.hbar * c.alpha[sk]);
        e.grad[sk] = ph * (real_part + chirp * prod);
    }
    return e;
}

Evaluated evaluate_at(const ModeIndex& n, const EigenFrame& f, const InvariantCoefficients& c,
                      const std::array<double, 3>& x, bool* underflow) {
    const auto xi = xi_of(f, c, x);
    std::array<HermiteFunctions, 3> hf;
    bool flag = false;
    for (int j = 0; j < 3; ++j) {
        hf[static_cast<std::size_t>(j)] = hermite_functions(n[j] + 1, xi[static_cast<std::size_t>(j)]);
        flag = flag || hf[static_cast<std::size_t>(j)].underflow;
    }
    if (underflow) *underflow = flag;
    return evaluate(n, f, c, {&hf[0].values, &hf[1].values, &hf[2].values}, amplitude(f, c), x);
}

// (I - lambda) u at all points given values and gradients.
double invariant_density(const InvariantCoefficients& c, double hbar, const std::array<double, 3>& x, cplx u,
                         const std::array<cplx, 3>& g) {
    double e = 0.0;
    const double u2 = std::norm(u);
    for (std::size_t k = 0; k < 3; ++k) {
        e += 0.5 * c.alpha[k] * hbar * hbar * std::norm(g[k]);
        e += c.beta[k] * std::real(std::conj(u) * x[k] * (-I1 * hbar * g[k]));
        e += 0.5 * c.gamma[k] * x[k] * x[k] * u2;
    }
    e += (c.delta[pair12] * x[0] * x[1] + c.delta[pair13] * x[0] * x[2] + c.delta[pair23] * x[1] * x[2]) * u2;
    return e;
}

}  // namespace

std::vector<ModeIndex> modes_up_to(int level) {
    std::vector<ModeIndex> out;
    for (int s = 0; s <= level; ++s) {
        for (int a = s; a >= 0; --a) {
            for (int b = s - a; b >= 0; --b) out.push_back({a, b, s - a - b});
        }
    }
    return out;
}

EigenFrame make_frame(const Diagonalization& diag, double hbar, double M, CoefficientFn coefficients) {
    EigenFrame f;
    for (std::size_t j = 0; j < 3; ++j) {
        if (!(diag.w_bar_sq[j] > 0.0)) {
            fail(ErrorKind::inadmissible,
                 fmt::format("Gamma is not positive definite (mode {} has wbar^2 = {:.6g})", j + 1, diag.w_bar_sq[j]));
        }
        f.wbar[j] = std::sqrt(diag.w_bar_sq[j]);
    }
    f.R = diag.R;
    f.hbar = hbar;
    f.M = M;
    f.coefficients = std::move(coefficients);
    return f;
}

double eigenvalue(const ModeIndex& n, const EigenFrame& frame) {
    double l = 0.0;
    for (int j = 0; j < 3; ++j) l += frame.hbar * frame.wbar[static_cast<std::size_t>(j)] * (n[j] + 0.5);
    return l;
}

double transformed_eigenfunction(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& X,
                                 bool* underflow) {
    double v = 1.0;
    bool flag = false;
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const double k = frame.M * frame.wbar[sj] / frame.hbar;
        const HermiteFunctions h = hermite_functions(n[j], std::sqrt(k) * X[sj]);
        flag = flag || h.underflow;
        v *= std::pow(k, 0.25) * h.values[static_cast<std::size_t>(n[j])];
    }
    if (underflow) *underflow = flag;
    return v;
}

WavefunctionSample original_eigenfunction(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& x,
                                          double t) {
    const InvariantCoefficients c = frame.coefficients(t);
    require_positive_alpha(c);
    WavefunctionSample s;
    s.x = x;
    s.t = t;
    s.value = evaluate_at(n, frame, c, x, &s.underflow).value;
    return s;
}

std::array<cplx, 3> original_gradient(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& x,
                                      double t) {
    const InvariantCoefficients c = frame.coefficients(t);
    require_positive_alpha(c);
    return evaluate_at(n, frame, c, x, nullptr).grad;
}

Quadrature::Quadrature(const EigenFrame& frame, double t, int order, int n_max)
    : frame_(frame), t_(t), order_(order), n_max_(n_max), coeffs_(frame.coefficients(t)) {
    if (order < n_max + 5) {
        fail(ErrorKind::accuracy, fmt::format("quadrature order {} below n_max + 5 = {}", order, n_max + 5));
    }
    require_positive_alpha(coeffs_);
    const GaussHermiteRule rule = gauss_hermite(order);
    nodes_ = rule.nodes;
    table_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) table_[i] = hermite_polynomials_normalized(n_max + 1, nodes_[i]);

    std::array<double, 3> s{};
    double jac = 1.0;
    for (std::size_t j = 0; j < 3; ++j) {
        s[j] = std::sqrt(frame.hbar / frame.wbar[j]);
        jac *= s[j] * std::sqrt(coeffs_.alpha[j]);
    }
    jac *= std::abs(frame.R.determinant());
    amplitude_ = amplitude(frame, coeffs_);

    const std::size_t n = nodes_.size();
    index_.reserve(n * n * n);
    points_.reserve(n * n * n);
    weights_.reserve(n * n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                const Vec3 X(s[0] * nodes_[a], s[1] * nodes_[b], s[2] * nodes_[c]);
                const Vec3 y = frame.R * X;
                std::array<double, 3> x{};
                for (int k = 0; k < 3; ++k) x[static_cast<std::size_t>(k)] = std::sqrt(coeffs_.alpha[static_cast<std::size_t>(k)]) * y(k);
                index_.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
                points_.push_back(x);
                // Values below keep the Gaussian out, so the plain rule weight applies.
                weights_.push_back(rule.weights[a] * rule.weights[b] * rule.weights[c] * jac);
            }
        }
    }
}

std::vector<cplx> Quadrature::values(const ModeIndex& n) const {
    require_mode(n, n_max_);
    std::vector<cplx> out(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& id = index_[i];
        double prod = 1.0;
        for (int j = 0; j < 3; ++j) {
            prod *= table_[static_cast<std::size_t>(id[static_cast<std::size_t>(j)])][static_cast<std::size_t>(n[j])];
        }
        out[i] = phase_factor(frame_, coeffs_, points_[i]) * (amplitude_ * prod);
    }
    return out;
}

std::vector<std::array<cplx, 3>> Quadrature::gradients(const ModeIndex& n) const {
    require_mode(n, n_max_);
    std::vector<std::array<cplx, 3>> out(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& id = index_[i];
        const std::array<const std::vector<double>*, 3> tabs{&table_[static_cast<std::size_t>(id[0])],
                                                             &table_[static_cast<std::size_t>(id[1])],
                                                             &table_[static_cast<std::size_t>(id[2])]};
        out[i] = evaluate(n, frame_, coeffs_, tabs, amplitude_, points_[i]).grad;
    }
    return out;
}

cplx Quadrature::inner(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * std::conj(a[i]) * b[i];
    return s;
}

double expectation_of_invariant(const ModeIndex& n, const EigenFrame& frame, double t, int order, int n_max) {
    const Quadrature q(frame, t, order, n_max);
    return expectation_of_invariant(n, q);
}

double expectation_of_invariant(const ModeIndex& n, const Quadrature& q) {
    const auto u = q.values(n);
    const auto g = q.gradients(n);
    double e = 0.0;
    for (int i = 0; i < q.size(); ++i) {
        const auto si = static_cast<std::size_t>(i);
        e += q.weight(i) * invariant_density(q.coefficients(), q.frame().hbar, q.point(i), u[si], g[si]);
    }
    return e;
}

Eigen::MatrixXcd gram_matrix(const Quadrature& q, const std::vector<ModeIndex>& modes) {
    std::vector<std::vector<cplx>> v;
    v.reserve(modes.size());
    for (const auto& m : modes) v.push_back(q.values(m));
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a; b < n; ++b) {
            g(a, b) = q.inner(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)]);
            g(b, a) = std::conj(g(a, b));
        }
    }
    return g;
}

double max_identity_deviation(const Eigen::MatrixXcd& g) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < g.rows(); ++a) {
        for (Eigen::Index b = 0; b < g.cols(); ++b) {
            worst = std::max(worst, std::abs(g(a, b) - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

GridResidual grid_operator_residual(const ModeIndex& n, const EigenFrame& frame, double t, const GridSpec& spec) {
    if (spec.points < 5) fail(ErrorKind::validation, "grid needs at least 5 points per axis");
    if (!(spec.extent > 0.0)) fail(ErrorKind::validation, "grid extent must be > 0");
    const InvariantCoefficients c = frame.coefficients(t);
    require_positive_alpha(c);
    const double lambda = spec.lambda.value_or(eigenvalue(n, frame));

    double sigma = 0.0;
    for (double w : frame.wbar) sigma = std::max(sigma, std::sqrt(frame.hbar / w));
    const int P = spec.points;
    std::array<double, 3> L{}, h{};
    for (std::size_t k = 0; k < 3; ++k) {
        L[k] = spec.extent * sigma * std::sqrt(c.alpha[k]);
        h[k] = 2.0 * L[k] / (P - 1);
    }
    auto coord = [&](int k, int i) { return -L[static_cast<std::size_t>(k)] + h[static_cast<std::size_t>(k)] * i; };
    auto idx = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(P) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(P) + static_cast<std::size_t>(k);
    };

    const std::size_t total = static_cast<std::size_t>(P) * static_cast<std::size_t>(P) * static_cast<std::size_t>(P);
    std::vector<cplx> u(total);
    double peak = 0.0, boundary = 0.0;
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < P; ++j) {
            for (int k = 0; k < P; ++k) {
                const std::array<double, 3> x{coord(0, i), coord(1, j), coord(2, k)};
                const cplx v = evaluate_at(n, frame, c, x, nullptr).value;
                u[idx(i, j, k)] = v;
                const double d = std::norm(v);
                peak = std::max(peak, d);
                const bool edge = i == 0 || j == 0 || k == 0 || i == P - 1 || j == P - 1 || k == P - 1;
                if (edge) boundary = std::max(boundary, d);
            }
        }
    }
    GridResidual out;
    out.boundary_ratio = peak > 0.0 ? boundary / peak : 0.0;
    out.spacing_max = std::max({h[0], h[1], h[2]});
    if (out.boundary_ratio > 1e-6) {
        fail(ErrorKind::containment,
             fmt::format("grid does not contain the state: boundary density ratio {:.3e}", out.boundary_ratio));
    }

    const double hb = frame.hbar;
    double num = 0.0, den = 0.0;
    for (int i = 1; i < P - 1; ++i) {
        for (int j = 1; j < P - 1; ++j) {
            for (int k = 1; k < P - 1; ++k) {
                const std::array<int, 3> at{i, j, k};
                const std::array<double, 3> x{coord(0, i), coord(1, j), coord(2, k)};
                const cplx u0 = u[idx(i, j, k)];
                cplx iu = 0.0;
                for (int a = 0; a < 3; ++a) {
                    const auto sa = static_cast<std::size_t>(a);
                    std::array<int, 3> pl = at, mi = at;
                    ++pl[sa];
                    --mi[sa];
                    const cplx up = u[idx(pl[0], pl[1], pl[2])];
                    const cplx um = u[idx(mi[0], mi[1], mi[2])];
                    const double xp = coord(a, pl[sa]), xm = coord(a, mi[sa]);
                    const cplx d2 = (up - 2.0 * u0 + um) / (h[sa] * h[sa]);
                    const cplx xd = x[sa] * (up - um) / (2.0 * h[sa]);
                    const cplx dx = (xp * up - xm * um) / (2.0 * h[sa]);
                    iu += 0.5 * c.alpha[sa] * (-hb * hb) * d2;
                    iu += 0.5 * c.beta[sa] * (-I1 * hb) * (xd + dx);
                    iu += 0.5 * c.gamma[sa] * x[sa] * x[sa] * u0;
                }
                iu += (c.delta[pair12] * x[0] * x[1] + c.delta[pair13] * x[0] * x[2] + c.delta[pair23] * x[1] * x[2]) * u0;
                num += std::norm(iu - lambda * u0);
                den += std::norm(u0);
            }
        }
    }
    out.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return out;
}

namespace {

std::vector<cplx> apply_ladder(int j, const Quadrature& q, const ModeIndex& n, double sign) {
    if (j < 0 || j > 2) fail(ErrorKind::validation, "ladder index out of range");
    const EigenFrame& f = q.frame();
    const InvariantCoefficients& c = q.coefficients();
    const auto sj = static_cast<std::size_t>(j);
    const double w = f.wbar[sj];
    const double cx = std::sqrt(w / (2.0 * f.hbar));
    const cplx cp = sign * I1 / std::sqrt(2.0 * w * f.hbar);
    const auto u = q.values(n);
    const auto g = q.gradients(n);
    std::vector<cplx> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& x = q.point(static_cast<int>(i));
        double X = 0.0;
        cplx P = 0.0;
        for (int k = 0; k < 3; ++k) {
            const auto sk = static_cast<std::size_t>(k);
            const double sa = std::sqrt(c.alpha[sk]);
            X += f.R(k, j) * x[sk] / sa;
            P += f.R(k, j) * sa * (-I1 * f.hbar * g[i][sk] + c.beta[sk] / c.alpha[sk] * x[sk] * u[i]);
        }
        out[i] = cx * X * u[i] + cp * P;
    }
    return out;
}

}  // namespace

std::vector<cplx> ladder_lower(int j, const Quadrature& q, const ModeIndex& n) { return apply_ladder(j, q, n, 1.0); }

std::vector<cplx> ladder_raise(int j, const Quadrature& q, const ModeIndex& n) { return apply_ladder(j, q, n, -1.0); }

LadderCheck ladder_check(int j, const Quadrature& q, const ModeIndex& n) {
    const auto v = ladder_lower(j, q, n);
    LadderCheck out;
    out.expected = std::sqrt(static_cast<double>(n[j]));
    if (n[j] == 0) {
        out.projection = std::sqrt(std::abs(q.inner(v, v)));
        out.remainder = std::abs(out.projection);
        return out;
    }
    ModeIndex m = n;
    if (j == 0) --m.n1;
    if (j == 1) --m.n2;
    if (j == 2) --m.n3;
    const auto um = q.values(m);
    out.projection = q.inner(um, v);
    std::vector<cplx> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - out.expected * um[i];
    out.remainder = std::sqrt(std::abs(q.inner(r, r)));
    return out;
}

double commutator_deviation(const Quadrature& q, const std::vector<ModeIndex>& modes) {
    double worst = 0.0;
    const std::size_t nm = modes.size();
    for (int j = 0; j < 3; ++j) {
        std::vector<std::vector<cplx>> raise_j, lower_j;
        for (const auto& m : modes) {
            raise_j.push_back(ladder_raise(j, q, m));
            lower_j.push_back(ladder_lower(j, q, m));
        }
        for (int k = 0; k < 3; ++k) {
            std::vector<std::vector<cplx>> raise_k, lower_k;
            for (const auto& m : modes) {
                raise_k.push_back(k == j ? raise_j[raise_k.size()] : ladder_raise(k, q, m));
                lower_k.push_back(k == j ? lower_j[lower_k.size()] : ladder_lower(k, q, m));
            }
            for (std::size_t a = 0; a < nm; ++a) {
                for (std::size_t b = 0; b < nm; ++b) {
                    // <u_a| a_j a_k^dag - a_k^dag a_j |u_b>
                    const cplx v = q.inner(raise_j[a], raise_k[b]) - q.inner(lower_k[a], lower_j[b]);
                    const double expected = (j == k && a == b) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(v - expected));
                }
            }
        }
    }
    return worst;
}

std::vector<WavefunctionSample> wavefunction_slice(const ModeIndex& n, const EigenFrame& frame, double t,
                                                   const SliceSpec& spec) {
    if (spec.points < 2) fail(ErrorKind::validation, "slice needs at least 2 points per axis");
    std::vector<WavefunctionSample> out;
    out.reserve(static_cast<std::size_t>(spec.points) * static_cast<std::size_t>(spec.points));
    const double step = 2.0 * spec.half_width / (spec.points - 1);
    for (int i = 0; i < spec.points; ++i) {
        for (int j = 0; j < spec.points; ++j) {
            const std::array<double, 3> x{-spec.half_width + step * i, -spec.half_width + step * j, spec.x3};
            out.push_back(original_eigenfunction(n, frame, x, t));
        }
    }
    return out;
}

}  // namespace triosc
