#pragma once

#include <stdexcept>
#include <string>

namespace nlhom {

/// Coarse failure category, mapped to CLI exit codes
/// (validation -> 2, solver -> 3, acceptance -> 4, io -> 3).
enum class ErrorKind { Validation, Solver, Acceptance, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define NLHOM_DEFINE_ERROR(NAME, KIND)                         \
    class NAME : public Error {                                \
    public:                                                    \
        explicit NAME(const std::string& what)                 \
            : Error(ErrorKind::KIND, std::string(#NAME ": ") + what) {} \
    }

// kernel
NLHOM_DEFINE_ERROR(NonUnitMass, Validation);
NLHOM_DEFINE_ERROR(NegativeDensity, Validation);
NLHOM_DEFINE_ERROR(UnboundedSupport, Validation);

// cell
NLHOM_DEFINE_ERROR(CoercivityViolation, Validation);
NLHOM_DEFINE_ERROR(NullSpaceDimension, Solver);
NLHOM_DEFINE_ERROR(NonPositiveDensity, Solver);
NLHOM_DEFINE_ERROR(CompatibilityViolation, Solver);
NLHOM_DEFINE_ERROR(SolverBreakdown, Solver);

// correctors
NLHOM_DEFINE_ERROR(AlphaOutOfRange, Validation);
NLHOM_DEFINE_ERROR(ScheduleMismatch, Solver);

// effective
NLHOM_DEFINE_ERROR(NonZeroMean, Solver);
NLHOM_DEFINE_ERROR(NotPositiveDefinite, Solver);
NLHOM_DEFINE_ERROR(EpsilonNonPositive, Validation);

// simulate
NLHOM_DEFINE_ERROR(GridMismatch, Validation);
NLHOM_DEFINE_ERROR(CFLViolation, Solver);
NLHOM_DEFINE_ERROR(NonFiniteValue, Solver);
NLHOM_DEFINE_ERROR(NotPSD, Solver);
NLHOM_DEFINE_ERROR(CheckpointMismatch, Validation);

// harness
NLHOM_DEFINE_ERROR(IoFailure, Io);
NLHOM_DEFINE_ERROR(ConfigError, Validation);

#undef NLHOM_DEFINE_ERROR

inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return 2;
        case ErrorKind::Solver: return 3;
        case ErrorKind::Acceptance: return 4;
        case ErrorKind::Io: return 3;
    }
    return 1;
}

}  // namespace nlhom
