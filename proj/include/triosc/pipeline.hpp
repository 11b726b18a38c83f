// pipeline.hpp — scenario runs, the property sweep and their file outputs.
#pragma once

#include "triosc/config.hpp"
#include "triosc/errors.hpp"
#include "triosc/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace triosc {

enum class Command { validate, evolve, spectrum, eigen, run };

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int config = 2;
inline constexpr int admissibility = 3;
inline constexpr int numeric = 4;
inline constexpr int formula = 5;
}  // namespace exit_code

int exit_code_for(ErrorKind kind) noexcept;

struct Check {
    std::string stage;
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    bool lower_bound{false};  // pass when value >= tolerance instead of value <= tolerance
    bool pass{false};
    int failure_code{exit_code::numeric};
};

struct StageTiming {
    std::string stage;
    double seconds{0.0};
};

struct RunReport {
    std::vector<Check> checks;
    std::vector<StageTiming> timings;  // printed, never written to files
    std::optional<GammaMatrix> gamma;
    std::optional<Diagonalization> diagonalization;
    std::vector<std::pair<std::string, double>> notes;  // labelled values shown in report.txt
    std::string failed_stage;
    std::string error_message;
    bool pass{false};
    int exit_code{exit_code::pass};
};

// Executes the stages required by `command` (for Command::run, those enabled in the
// config) and writes CSV files plus report.txt into out_dir. Library errors are
// caught, recorded against the failing stage, and mapped to an exit code.
RunReport run(const ScenarioConfig& config, Command command, const std::string& out_dir);

struct SweepReport {
    int count{0};
    int failures{0};
    int class1{0};
    int class2{0};
    double max_eigen_rel_error{0.0};
    double max_primary_offdiag{0.0};      // relative to |Gamma|
    double max_alternative_offdiag{0.0};  // relative to |Gamma|
    double min_opposite_offdiag{0.0};     // relative to |Gamma|
    double max_formula_mismatch{0.0};
    double max_rotation_error{0.0};
    int exclusivity_failures{0};
    std::vector<std::string> failure_notes;
    int exit_code{exit_code::pass};
};

// Random symmetric Gamma: diagonal U(0.5, 3), off-diagonal U(-1, 1), redrawn while an
// eigenvalue gap is below 1e-3 |Gamma|. ErrorKind::validation if count < 1.
SweepReport sweep(const ScenarioConfig& config, int count, std::uint64_t seed, const std::string& out_dir);

// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
double unit_uniform(std::uint64_t bits) noexcept;

}  // namespace triosc
