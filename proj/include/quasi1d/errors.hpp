#pragma once
// Exception types shared across the library. Everything derives from
// quasi1d::Error so callers can catch per-category or catch-all.

#include <stdexcept>
#include <string>
#include <vector>

namespace quasi1d {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ cell model

struct CellViolation {
    enum class Kind {
        MarkedVertexMissing,
        UnderlineEqualsOverline,
        NonPositiveRate,
        NotStronglyConnected,
        SelfLoop,
        DuplicateEdge,
        UnknownVertex,
        DuplicateVertex,
        Empty,
    };
    Kind kind;
    std::string detail;  // human-readable, names the offending items
};

const char* to_string(CellViolation::Kind k);

struct CellValidationError : Error {
    std::vector<CellViolation> violations;
    explicit CellValidationError(std::vector<CellViolation> v);
};

// --------------------------------------------------------------- solver

// Linear solve produced NaN/Inf (matrix numerically singular). Cannot occur
// for graphs built from validated cells.
struct SingularSystemError : Error {
    using Error::Error;
};

// Residual of the solved system exceeded the configured tolerance.
struct ToleranceNotMetError : Error {
    double residual;
    double tolerance;
    ToleranceNotMetError(const std::string& what, double res, double tol)
        : Error(what), residual(res), tolerance(tol) {}
};

// ------------------------------------------------------------ reduction

// A chain family violates the removal preconditions (bad intermediate
// degrees, duplicated intermediates, a chain together with its reversal, ...).
struct InvalidFamilyError : Error {
    using Error::Error;
};

// ------------------------------------------------------------ simulation

// An excursion exceeded the jump cap (likely near-degenerate rates).
struct CycleCapExceededError : Error {
    using Error::Error;
};

struct InsufficientSamplesError : Error {
    using Error::Error;
};

}  // namespace quasi1d
