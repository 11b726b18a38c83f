// dynamics.hpp — Ermakov auxiliary equations and classical equations of motion.
#pragma once

#include "triosc/grid.hpp"
#include "triosc/params.hpp"

#include <array>
#include <vector>

namespace triosc {

struct IntegratorOptions {
    double step_tolerance{1e-6};  // bound on the step-doubling estimate
    double rho_min{1e-12};
};

// Samples of one rho_j on a grid.
struct AuxiliaryComponent {
    std::vector<double> rho;
    std::vector<double> rhodot;
    double max_step_error{0.0};
};

struct AuxiliaryState {
    std::array<double, 3> rho{};
    std::array<double, 3> rhodot{};
};

// rho_j(t), rho'_j(t) for j = 0..2 on a uniform grid; cubic Hermite interpolation off-grid.
class AuxiliarySolution {
public:
    AuxiliarySolution(TimeGrid grid, std::array<AuxiliaryComponent, 3> components);

    const TimeGrid& grid() const noexcept { return grid_; }
    const AuxiliaryComponent& component(int j) const { return comp_.at(static_cast<std::size_t>(j)); }

    AuxiliaryState sample(int k) const;
    // Throws ErrorKind::domain outside the grid window.
    AuxiliaryState at(double t) const;

    double max_step_error() const noexcept;

private:
    TimeGrid grid_;
    std::array<AuxiliaryComponent, 3> comp_;
};

// Integrates rho'' = -(m'/m) rho' - omega~^2 rho + Omega^2 / (4 m^2 rho^3).
// Errors: rho <= rho_min -> singularity; step estimate > tolerance -> accuracy.
AuxiliaryComponent solve_ermakov(const SystemParameters& params, int j, double rho0, double rhodot0,
                                 const TimeGrid& grid, const IntegratorOptions& options = {});

// All three components on params.grid, with initial data from params
// (fixed point at t0 and zero slope where unset).
AuxiliarySolution solve_auxiliary(const SystemParameters& params, const IntegratorOptions& options = {});

// [Omega^2 / (4 m^2 omega~^2)]^(1/4); ErrorKind::no_fixed_point if omega~^2 <= 0.
double ermakov_fixed_point(const SystemParameters& params, int j, double t);

// Max over interior grid points of |Ermakov LHS - RHS| / max(1, Omega_j^2), with rho''
// from a sixth-order central difference of the rho' samples.
double max_ermakov_residual(const SystemParameters& params, const AuxiliarySolution& aux, int j);

struct ClassicalState {
    double t{0.0};
    std::array<double, 3> x{};
    std::array<double, 3> p{};  // canonical momenta
};

struct Trajectory {
    std::vector<ClassicalState> states;
    double max_step_error{0.0};
};

// Velocity <-> canonical momentum for the Hamiltonian with b_j (x p + p x) terms:
// p_j = m_j (x'_j - b_j x_j).
double momentum_from_velocity(const SystemParameters& params, int j, double t, double x, double v);
double velocity_from_momentum(const SystemParameters& params, int j, double t, double x, double p);

// Integrates x''_j + (m'_j/m_j) x'_j + omega~_j^2 x_j + sum_k (d_jk/m_j) x_k = 0 on `grid`
// (default: aux.grid(); a reversed grid integrates backward). state0.t must equal grid.t0.
// Errors: non-finite state -> divergence, naming the first bad time.
Trajectory integrate_classical(const SystemParameters& params, const AuxiliarySolution& aux,
                               const ClassicalState& state0, const TimeGrid& grid,
                               const IntegratorOptions& options = {});
Trajectory integrate_classical(const SystemParameters& params, const AuxiliarySolution& aux,
                               const ClassicalState& state0, const IntegratorOptions& options = {});

// Classical Hamiltonian value (for conservation checks in constant-parameter cases).
double hamiltonian_value(const SystemParameters& params, const AuxiliarySolution& aux,
                         const ClassicalState& state);

}  // namespace triosc
