#include "triosc/errors.hpp"

namespace triosc {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::no_fixed_point: return "no-fixed-point";
    case ErrorKind::inadmissible: return "inadmissible";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::formula_inconsistency: return "formula-inconsistency";
    case ErrorKind::containment: return "containment";
    case ErrorKind::contract: return "contract";
    case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace triosc
