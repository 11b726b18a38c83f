// spectrum.hpp — the constant frequency matrix Gamma of the transformed invariant,
// its closed-form eigenvalues and the Euler angles that diagonalize it.
#pragma once

#include "triosc/dynamics.hpp"
#include "triosc/linalg.hpp"
#include "triosc/params.hpp"

#include <array>
#include <string>
#include <vector>

namespace triosc {

struct GammaMatrix {
    std::array<double, 3> w0sq{1.0, 1.0, 1.0};    // diagonal omega_{0,j}^2
    std::array<double, 3> Delta{0.0, 0.0, 0.0};   // (Delta12, Delta13, Delta23)
    double M{1.0};

    Mat3 matrix() const;
    double norm() const;  // Frobenius
    static GammaMatrix from_matrix(const Mat3& g, double M = 1.0);
};

struct GammaConstancyReport {
    // Relative drift of (w01, w02, w03, D12, D13, D23) over the grid.
    std::array<double, 6> drift{};
    double max_drift{0.0};
    std::string worst_entry;
    double tolerance{1e-8};
    bool pass{true};
};

struct GammaBuild {
    GammaMatrix gamma;  // t0 values
    GammaConstancyReport constancy;
};

// Diagonal from alpha_j gamma_j - beta_j^2, off-diagonals Delta_jk = delta_jk sqrt(alpha_j alpha_k),
// sampled on the auxiliary grid. ErrorKind::inadmissible if any entry drifts beyond tolerance.
GammaBuild build_gamma(const SystemParameters& params, const AuxiliarySolution& aux, double tolerance = 1e-8);
// Same, without throwing.
GammaBuild sample_gamma(const SystemParameters& params, const AuxiliarySolution& aux, double tolerance = 1e-8);

struct ClosedFormEigenvalues {
    std::array<double, 3> values{};  // decreasing
    double w0sq{0.0};                // trace
    double J{0.0};
    double Theta{0.0};
    double A{0.0};
    double B{0.0};
    double Delta{0.0};
    bool fallback{false};  // B == 0, values from the Jacobi eigensolver
};

// ErrorKind::formula_inconsistency if |A / (2 B^{3/2})| exceeds 1 + 1e-12.
ClosedFormEigenvalues closed_form_eigenvalues(const GammaMatrix& gamma);

// Two-argument arctangent with tan(result) = z2 / z1, range (-pi, pi].
double atan2v(double z1, double z2);

enum class GammaClass { class1 = 1, class2 = 2 };

struct EulerAngles {
    double phi{0.0};
    double theta{0.0};
    double varphi{0.0};
    GammaClass cls{GammaClass::class1};
    int set_id{0};  // 0 primary, 1..5 alternative sets, -1 synthesized from an eigensolver
};

struct AngleInputs {
    double u_theta{0.0}, v_theta{0.0}, u_varphi{0.0}, v_varphi{0.0};
};

// Square-root quantities feeding theta and varphi. Radicands slightly below zero
// (relative to |Gamma|^2 for theta and |Gamma|^3 for varphi) are clamped;
// more negative ones raise ErrorKind::formula_inconsistency.
AngleInputs angle_inputs(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig);

// (u_phi, v_phi) for given theta and varphi.
std::pair<double, double> phi_inputs(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double theta,
                                     double varphi);

struct EulerSolution {
    EulerAngles angles;
    std::array<double, 2> class_residual{};  // partial-transform residual for the plus and minus sign
    double offdiag_residual{0.0};            // max |off-diagonal| of R^T Gamma R
    double tolerance{0.0};                   // absolute, rel_tol * |Gamma|
};

// ErrorKind::degeneracy if an eigenvalue gap is below 1e-9 |Gamma|;
// ErrorKind::formula_inconsistency if neither sign diagonalizes.
EulerSolution euler_angles(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig, double rel_tol = 1e-9);

Mat3 rotation_matrix(const EulerAngles& angles);   // product of single-axis rotations
Mat3 composite_rotation(const EulerAngles& angles);  // entrywise closed form

struct TransformedGamma {
    std::array<double, 3> w_bar_sq{};
    std::array<double, 3> delta_bar{};  // (12, 13, 23)
    Mat3 direct;                        // R^T Gamma R
    double max_mismatch{0.0};           // formulas vs direct product
};

TransformedGamma transformed_gamma(const GammaMatrix& gamma, const EulerAngles& angles);

struct AngleSetReport {
    std::vector<EulerAngles> sets;                 // primary then the five alternatives
    std::vector<double> residuals;                 // max off-diagonal per set
    std::vector<double> opposite_class_residuals;  // same sets with the other class's signs
    double tolerance{0.0};
};

// ErrorKind::formula_inconsistency if any set fails to diagonalize.
AngleSetReport alternative_angle_sets(const GammaMatrix& gamma, const ClosedFormEigenvalues& eig,
                                      double rel_tol = 1e-9);

// Sylvester's criterion on the leading principal minors.
bool positive_definite(const GammaMatrix& gamma);

struct Diagonalization {
    ClosedFormEigenvalues eig;
    EulerAngles angles;
    Mat3 R;
    std::array<double, 3> w_bar_sq{};  // diagonal of R^T Gamma R
    std::array<int, 3> permutation{0, 1, 2};  // w_bar_sq[k] matches eig.values[permutation[k]]
    double offdiag_residual{0.0};
    bool eigensolver_fallback{false};
};

// Closed-form route, falling back to the Jacobi eigensolver for degenerate spectra.
Diagonalization diagonalize(const GammaMatrix& gamma, double rel_tol = 1e-9);

// Angles reproducing a proper rotation R through rotation_matrix.
EulerAngles angles_from_rotation(const Mat3& R);

}  // namespace triosc
