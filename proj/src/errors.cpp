#include "addrep/errors.hpp"

namespace addrep {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::HorizonExceeded:   return "HorizonExceeded";
        case ErrorKind::EmptyRange:        return "EmptyRange";
        case ErrorKind::DomainError:       return "DomainError";
        case ErrorKind::EmptySet:          return "EmptySet";
        case ErrorKind::MalformedInput:    return "MalformedInput";
        case ErrorKind::IoError:           return "IoError";
        case ErrorKind::MalformedWalk:     return "MalformedWalk";
        case ErrorKind::BudgetExceeded:    return "BudgetExceeded";
        case ErrorKind::InconsistentInput: return "InconsistentInput";
        case ErrorKind::DoublingFailure:   return "DoublingFailure";
        case ErrorKind::NoGapFound:        return "NoGapFound";
        case ErrorKind::RegimeViolation:   return "RegimeViolation";
        case ErrorKind::PairMissing:       return "PairMissing";
        case ErrorKind::PatchFailure:      return "PatchFailure";
        case ErrorKind::Internal:          return "Internal";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::HorizonExceeded:
        case ErrorKind::EmptyRange:
        case ErrorKind::DomainError:
        case ErrorKind::EmptySet:
        case ErrorKind::MalformedInput:
        case ErrorKind::IoError:
        case ErrorKind::MalformedWalk:
        case ErrorKind::BudgetExceeded:
        case ErrorKind::InconsistentInput:
            return 2;
        case ErrorKind::DoublingFailure:
        case ErrorKind::NoGapFound:
        case ErrorKind::RegimeViolation:
        case ErrorKind::PairMissing:
        case ErrorKind::PatchFailure:
            return 3;
        case ErrorKind::Internal:
            return 4;
    }
    return 4;
}

} // namespace addrep
