// invariant.hpp — coefficients of the quadratic invariant and its verification.
//
//   I = 1/2 sum_j [alpha_j p_j^2 + beta_j (x_j p_j + p_j x_j) + gamma_j x_j^2]
//       + delta_12 x1 x2 + delta_13 x1 x3 + delta_23 x2 x3
#pragma once

#include "triosc/dynamics.hpp"
#include "triosc/params.hpp"

#include <array>
#include <functional>
#include <vector>

namespace triosc {

struct InvariantCoefficients {
    double t{0.0};
    std::array<double, 3> alpha{};  // 1/mass
    std::array<double, 3> beta{};   // 1/time
    std::array<double, 3> gamma{};  // mass/time^2
    std::array<double, 3> delta{};  // (delta12, delta13, delta23), energy/length^2
    double F{0.0};                  // alpha_1 m_1
};

using CoefficientFn = std::function<InvariantCoefficients(double)>;
using CouplingFn = std::function<Couplings(double)>;

InvariantCoefficients coefficients_at(const SystemParameters& params, const AuxiliarySolution& aux, double t);

// alpha_j gamma_j - beta_j^2, which should equal (alpha0_j Omega_j / 2)^2.
std::array<double, 3> frequency_identity(const InvariantCoefficients& c);

struct LvnResidualReport {
    // Scaled max residuals of the six coefficient ODEs, in order
    // alpha, beta, gamma, delta12, delta13, delta23.
    std::array<double, 6> max_residual{};
    double fd_step{0.0};
    double tolerance{0.0};
    bool pass{false};

    double worst() const noexcept;
};

// Centered differences at the interior grid points t with t +- fd_step inside the window.
// Each residual is divided by the largest magnitude of any term of its equation over the grid.
// fd_step <= 0 selects the grid step.
LvnResidualReport lvn_residuals(const SystemParameters& params, const AuxiliarySolution& aux,
                                double fd_step = 0.0, double tolerance = 1e-6);
LvnResidualReport lvn_residuals(const SystemParameters& params, const CoefficientFn& coefficients,
                                const CouplingFn& couplings, const TimeGrid& grid, double fd_step,
                                double tolerance);

// Classical invariant value; ErrorKind::contract if coeffs.t != state.t.
double classical_invariant_value(const InvariantCoefficients& coeffs, const ClassicalState& state);

struct DriftSample {
    double t{0.0};
    double value{0.0};
    double rel_drift{0.0};
};

struct DriftReport {
    double max_drift{0.0};
    bool absolute{false};  // I(t0) == 0, drift is absolute
    std::vector<DriftSample> series;
};

DriftReport invariant_drift(const SystemParameters& params, const AuxiliarySolution& aux,
                            const Trajectory& trajectory);

}  // namespace triosc
