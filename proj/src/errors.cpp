#include "latcr/errors.hpp"

namespace latcr {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::InfeasibleConstraint: return "infeasible_constraint";
        case ErrorKind::NoRoot: return "no_root";
        case ErrorKind::DegenerateDenominator: return "degenerate_denominator";
        case ErrorKind::SingularSystem: return "singular_system";
        case ErrorKind::ColumnSumViolation: return "column_sum_violation";
        case ErrorKind::AmbiguousLandscape: return "ambiguous_landscape";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace latcr
