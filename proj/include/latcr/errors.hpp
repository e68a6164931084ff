#pragma once

#include <stdexcept>
#include <string>

namespace latcr {

enum class ErrorKind {
    InvalidArgument,
    InfeasibleConstraint,
    NoRoot,
    DegenerateDenominator,
    SingularSystem,
    ColumnSumViolation,
    AmbiguousLandscape,
    Io,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported as an Error carrying its kind, so the CLI
/// can map it to a stable exit code.
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

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace latcr
