// params.hpp — system parameters, admissibility conditions and the synthesized couplings.
//
// Oscillator indices are 0-based (0, 1, 2). Coupling pairs are ordered
// (12, 13, 23) and addressed by PairIndex.
#pragma once

#include "triosc/curve.hpp"
#include "triosc/grid.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace triosc {

class AuxiliarySolution;

enum PairIndex : int { pair12 = 0, pair13 = 1, pair23 = 2 };

// (j, k) oscillator indices of a coupling pair, and the third ("spectator") index.
constexpr std::pair<int, int> pair_members(int pair) noexcept {
    return pair == pair12 ? std::pair{0, 1} : pair == pair13 ? std::pair{0, 2} : std::pair{1, 2};
}
constexpr int pair_spectator(int pair) noexcept {
    return pair == pair12 ? 2 : pair == pair13 ? 1 : 0;
}
constexpr int pair_of(int j, int k) noexcept {
    const int a = j < k ? j : k;
    const int b = j < k ? k : j;
    return a == 0 ? (b == 1 ? pair12 : pair13) : pair23;
}

using Couplings = std::array<double, 3>;  // (d12, d13, d23)

// How d_jk(t) is produced for the dynamics and the invariant.
enum class CouplingMode {
    derived,  // closed-form solution of the coupling ODEs (admissible)
    frozen,   // d_jk(t) = d_jk(t0); negative control, violates the coupling ODEs
};

struct SystemParameters {
    std::array<ParameterCurve, 3> m{ParameterCurve::constant(1.0), ParameterCurve::constant(1.0),
                                    ParameterCurve::constant(1.0)};
    std::array<ParameterCurve, 3> b{};
    std::array<ParameterCurve, 3> omega{ParameterCurve::constant(1.0), ParameterCurve::constant(1.0),
                                        ParameterCurve::constant(1.0)};
    Couplings d0{0.0, 0.0, 0.0};           // d_jk(t0), energy / length^2
    std::array<double, 3> alpha0{1.0, 1.0, 1.0};
    std::array<double, 3> Omega{2.0, 2.0, 2.0};
    double hbar{1.0};
    double M{1.0};  // reference mass of the transformed frame
    TimeGrid grid{0.0, 1.0, 2048};
    // Ermakov initial data; unset means the fixed point at t0 with zero slope.
    std::array<std::optional<double>, 3> rho0{};
    std::array<std::optional<double>, 3> rhodot0{};
    CouplingMode coupling_mode{CouplingMode::derived};

    // Throws ErrorKind::validation on violated invariants
    // (alpha0, Omega, M, hbar > 0, N >= 16, m_j > 0 on the window, finite seeds).
    void validate() const;

    // Curve evaluation restricted to the window; ErrorKind::domain outside.
    CurveSample mass(int j, double t) const;
    CurveSample damping(int j, double t) const;
    CurveSample frequency(int j, double t) const;
};

// omega~_j^2 = omega_j^2 - b_j^2 - b'_j - b_j m'_j / m_j  (may be negative)
double modified_frequency_sq(const SystemParameters& params, int j, double t);

// Closed-form solution of d'_jk = -G_jk d_jk:
//   d12(t) = d12(t0) K12(t0)/K12(t),  K12 = m3 rho1 rho2 rho3^2  (and cyclic).
// Throws ErrorKind::singularity if any rho_j(t) <= 0.
Couplings derive_couplings(const SystemParameters& params, const AuxiliarySolution& aux, double t);

// Couplings in effect under params.coupling_mode.
Couplings couplings_at(const SystemParameters& params, const AuxiliarySolution& aux, double t);

// The G_jk rates in their text form and in the all-F=alpha1 m1 alternative form.
struct GRates {
    double g12{0.0};     // m3'/m3 + r1 + r2 + 2 r3
    double g13{0.0};     // m2'/m2 + r1 + 2 r2 + r3
    double g23{0.0};     // m1'/m1 + 2 r1 + r2 + r3
    double g12_alt{0.0};  // m1'/m1 + 3 r1 + r2
    double g13_alt{0.0};  // m1'/m1 + 3 r1 + r3
};
GRates g_rates(const SystemParameters& params, const AuxiliarySolution& aux, double t);

// Max over the grid of |G12 - G12_alt| and |G13 - G13_alt|.
double check_g_form_consistency(const SystemParameters& params, const AuxiliarySolution& aux);

struct AdmissibilityOptions {
    double tolerance{1e-8};           // relative spread of alpha_j m_j
    double coupling_tolerance{1e-6};  // relative residual of the coupling ODEs
};

struct AdmissibilityReport {
    double max_alpha_m_violation{0.0};
    std::vector<std::array<double, 3>> alpha_m;  // alpha_j(t_k) m_j(t_k) per grid point
    double max_coupling_residual{0.0};
    bool negative_modified_frequency{false};
    double tolerance{0.0};
    double coupling_tolerance{0.0};
    bool pass{false};
};

AdmissibilityReport validate_admissibility(const SystemParameters& params,
                                           const AuxiliarySolution& aux,
                                           const AdmissibilityOptions& options = {});

struct ScaledFamilySpec {
    std::array<double, 3> c{1.0, 1.0, 1.0};
    ParameterCurve base_mass{ParameterCurve::constant(1.0)};
    ParameterCurve frequency{ParameterCurve::constant(1.0)};
    ParameterCurve damping{};
    double Omega{2.0};
    double alpha0{1.0};
    Couplings d0{0.0, 0.0, 0.0};
    TimeGrid grid{0.0, 1.0, 2048};
    // Base Ermakov data; unset rho means the base fixed point at t0.
    std::optional<double> rho0{};
    double rhodot0{0.0};
    double hbar{1.0};
    double M{1.0};
};

// m_j = c_j m(t), shared omega/b/Omega/alpha0, rho_j(t0) = rho(t0)/sqrt(c_j),
// rho'_j(t0) = rho'(t0)/sqrt(c_j). Throws ErrorKind::validation if any c_j <= 0.
SystemParameters make_scaled_family(const ScaledFamilySpec& spec);

}  // namespace triosc
