#pragma once

// Error taxonomy shared by every component. Each kind carries a process
// exit code so the CLI can distinguish contract violations (2), expected
// mathematical negatives (3), and internal invariant breaches (4).

#include <stdexcept>
#include <string>

namespace addrep {

enum class ErrorKind {
    // contract / input errors -> exit 2
    HorizonExceeded,
    EmptyRange,
    DomainError,
    EmptySet,
    MalformedInput,
    IoError,
    MalformedWalk,
    BudgetExceeded,
    InconsistentInput,
    // expected mathematical negatives -> exit 3
    DoublingFailure,
    NoGapFound,
    RegimeViolation,
    PairMissing,
    PatchFailure,
    // invariant breaches -> exit 4
    Internal,
};

const char* error_kind_name(ErrorKind kind);
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace addrep
