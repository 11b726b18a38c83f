// config.hpp — scenario configuration files.
//
// Sectioned key = value text; '#' starts a comment. Sections:
//   [oscillator.1] .. [oscillator.3]  m, omega (required), b, alpha0, Omega, rho0, rhodot0, x0, p0
//   [couplings]   d12, d13, d23, mode = derived | frozen
//   [constants]   hbar, M
//   [grid]        t0, t1, N, quadrature, spatial_points, extent, n_max, mode_level
//   [tolerances]  see Tolerances
//   [pipelines]   validate, evolve, spectrum, eigen (true/false), trajectories, seed
//   [output]      dir, wavefunction_slice (true/false)
// Curve values are a bare number (constant) or a comma-separated spec such as
//   kind=sinusoid, offset=1, amp=0.2, freq=0.0125, phase=1.5707963267948966
//   kind=tabulated, t=0;1;2;3, y=1;1.1;1.2;1.3
#pragma once

#include "triosc/eigenstates.hpp"
#include "triosc/params.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace triosc {

struct Tolerances {
    double admissibility{1e-8};
    double coupling{1e-6};
    double ermakov{1e-6};
    double g_form{1e-8};
    double identity{1e-10};
    double lvn{1e-6};
    double drift{1e-6};
    double gamma{1e-8};
    double offdiag{1e-9};
    double eigenvalues{1e-10};
    double formula{1e-12};  // trigonometric formulas and rotation identities
    double gram{1e-8};
    double expectation{1e-7};
    double grid_residual{5e-3};
    double ladder{1e-8};
    double commutator{1e-7};
    double step{1e-6};
};

struct Pipelines {
    bool validate{true};
    bool evolve{true};
    bool spectrum{true};
    bool eigen{true};
};

struct ScenarioConfig {
    SystemParameters params;
    std::array<std::optional<double>, 3> x0{};  // explicit initial state for the first trajectory
    std::array<std::optional<double>, 3> p0{};
    Tolerances tolerances;
    Pipelines pipelines;
    int trajectories{10};
    std::uint64_t seed{42};
    int quadrature_order{40};
    GridSpec spatial;
    int n_max{12};
    int mode_level{3};
    std::string output_dir;  // empty: decided by the caller
    bool wavefunction_slice{false};
};

// ErrorKind::config with "source:line: key: message" context for syntax and schema
// problems; parameter validation errors keep ErrorKind::validation.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

// Curve spec as accepted in configuration files.
ParameterCurve parse_curve(const std::string& spec);

}  // namespace triosc
