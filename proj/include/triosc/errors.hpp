#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace triosc {

enum class ErrorKind {
    validation,
    domain,
    singularity,
    accuracy,
    divergence,
    no_fixed_point,
    inadmissible,
    degeneracy,
    formula_inconsistency,
    containment,
    contract,
    config,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace triosc
