#pragma once
#include <stdexcept>
#include <string>

namespace gs {

enum class ErrorCode {
    InvalidArgument,
    BoundaryZero,
    NonIntegerWinding,
    DepthExceeded,
    MultiplicityCap,
    IncompleteCertificate,
    OutOfCertifiedRange,
    BisectionFailure,
    NonPositiveDefinite,
    NearSingular,
    InsufficientDecay,
    SolverFailure,
    ResolutionBudget,
    StepCountTooSmall,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& what)
        : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
    ErrorCode code() const { return code_; }
    // usage errors map to exit status 2, everything else is numerical
    bool is_usage() const { return code_ == ErrorCode::InvalidArgument; }

private:
    ErrorCode code_;
};

}  // namespace gs
