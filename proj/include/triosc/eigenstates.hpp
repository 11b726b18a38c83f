// eigenstates.hpp — eigenvalues and eigenfunctions of the invariant, ladder
// operators, and their numerical verification.
//
// Original-frame coordinates x map to normal-mode coordinates by
//   X = R^T (alpha^{-1/2} x),   xi_j = sqrt(wbar_j / hbar) X_j.
#pragma once

#include "triosc/invariant.hpp"
#include "triosc/linalg.hpp"
#include "triosc/spectrum.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace triosc {

using cplx = std::complex<double>;

struct ModeIndex {
    int n1{0}, n2{0}, n3{0};

    int operator[](int j) const { return j == 0 ? n1 : j == 1 ? n2 : n3; }
    int total() const { return n1 + n2 + n3; }
    bool operator==(const ModeIndex&) const = default;
};

// All modes with n1 + n2 + n3 <= level, ordered by level then lexicographically descending.
std::vector<ModeIndex> modes_up_to(int level);

struct EigenFrame {
    std::array<double, 3> wbar{1.0, 1.0, 1.0};  // sqrt of the diagonal of R^T Gamma R
    Mat3 R{Mat3::Identity()};
    double hbar{1.0};
    double M{1.0};
    CoefficientFn coefficients;
};

// ErrorKind::inadmissible unless every diagonal entry of R^T Gamma R is positive.
EigenFrame make_frame(const Diagonalization& diag, double hbar, double M, CoefficientFn coefficients);

double eigenvalue(const ModeIndex& n, const EigenFrame& frame);

struct WavefunctionSample {
    cplx value;
    std::array<double, 3> x{};
    double t{0.0};
    bool underflow{false};
};

// Product of normalized Hermite functions in the transformed coordinates X
// (width parameter M wbar_j / hbar).
double transformed_eigenfunction(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& X,
                                 bool* underflow = nullptr);

// ErrorKind::domain if any alpha_j(t) <= 0.
WavefunctionSample original_eigenfunction(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& x,
                                          double t);
// d/dx_k of the original-frame eigenfunction.
std::array<cplx, 3> original_gradient(const ModeIndex& n, const EigenFrame& frame, const std::array<double, 3>& x,
                                      double t);

// Tensor Gauss-Hermite rule in xi, mapped to x at a fixed time.
// Node vectors (values, gradients, ladder images) omit the common factor
// exp(-|xi|^2/2); inner() pairs them with the plain rule weights.
class Quadrature {
public:
    Quadrature(const EigenFrame& frame, double t, int order = 40, int n_max = 12);

    int size() const noexcept { return static_cast<int>(weights_.size()); }
    int order() const noexcept { return order_; }
    double t() const noexcept { return t_; }
    const EigenFrame& frame() const noexcept { return frame_; }
    const InvariantCoefficients& coefficients() const noexcept { return coeffs_; }
    const std::array<double, 3>& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

    std::vector<cplx> values(const ModeIndex& n) const;
    std::vector<std::array<cplx, 3>> gradients(const ModeIndex& n) const;

    // sum_i w_i conj(a_i) b_i
    cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) const;

private:
    EigenFrame frame_;
    double t_;
    int order_;
    int n_max_;
    InvariantCoefficients coeffs_;
    std::vector<double> nodes_;                   // 1D xi nodes
    std::vector<std::vector<double>> table_;      // normalized Hermite polynomials per node, 0..n_max+1
    std::vector<std::array<int, 3>> index_;       // node indices per tensor point
    std::vector<std::array<double, 3>> points_;   // x
    std::vector<double> weights_;                 // includes the Gaussian factor and the Jacobian
    double amplitude_{1.0};                       // prod (wbar/(pi hbar alpha))^{1/4} / pi^{-3/4}
};

// <u_n | I(t) | u_n> with I applied through analytic derivatives.
// ErrorKind::accuracy if order < n_max + 5; ErrorKind::validation if n exceeds n_max.
double expectation_of_invariant(const ModeIndex& n, const EigenFrame& frame, double t, int order = 40,
                                int n_max = 12);
double expectation_of_invariant(const ModeIndex& n, const Quadrature& q);

Eigen::MatrixXcd gram_matrix(const Quadrature& q, const std::vector<ModeIndex>& modes);
double max_identity_deviation(const Eigen::MatrixXcd& g);

struct GridSpec {
    int points{32};       // per axis
    double extent{6.0};   // half-width in characteristic lengths
    std::optional<double> lambda;  // overrides the eigenvalue (negative control)
};

struct GridResidual {
    double residual{0.0};  // ||I u - lambda u|| / ||u|| over interior points
    double spacing_max{0.0};
    double boundary_ratio{0.0};
};

// Second-order central differences on a uniform box in x.
// ErrorKind::containment if the boundary density exceeds 1e-6 of the maximum.
GridResidual grid_operator_residual(const ModeIndex& n, const EigenFrame& frame, double t, const GridSpec& spec = {});

// a_j u_n and a_j^dagger u_n on the quadrature nodes (j 0-based).
std::vector<cplx> ladder_lower(int j, const Quadrature& q, const ModeIndex& n);
std::vector<cplx> ladder_raise(int j, const Quadrature& q, const ModeIndex& n);

struct LadderCheck {
    cplx projection{0.0};  // <u_{n-e_j} | a_j u_n>, or the norm of a_j u_n when n_j = 0
    double expected{0.0};  // sqrt(n_j)
    double remainder{0.0};  // || a_j u_n - sqrt(n_j) u_{n-e_j} ||
};

LadderCheck ladder_check(int j, const Quadrature& q, const ModeIndex& n);

// max over j, k and basis pairs of |<u_m|[a_j, a_k^dagger]|u_n> - delta_jk delta_mn|.
double commutator_deviation(const Quadrature& q, const std::vector<ModeIndex>& modes);

struct SliceSpec {
    double x3{0.0};
    int points{41};
    double half_width{3.0};
};

// Rows of (x1, x2, u) on a square grid at fixed x3.
std::vector<WavefunctionSample> wavefunction_slice(const ModeIndex& n, const EigenFrame& frame, double t,
                                                   const SliceSpec& spec);

}  // namespace triosc
