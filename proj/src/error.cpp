#include "primerange/error.hpp"

namespace primerange {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::RangeTooLarge: return "range too large";
        case ErrorKind::SingularDesign: return "singular design";
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::HeaderMismatch: return "header mismatch";
        case ErrorKind::NonMonotonic: return "non-monotonic x";
        case ErrorKind::SquareMismatch: return "x_squared mismatch";
        case ErrorKind::Gap: return "gap in x";
        case ErrorKind::Io: return "I/O error";
        case ErrorKind::NotFound: return "not found";
        case ErrorKind::Integrity: return "integrity error";
    }
    return "error";
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Io:
        case ErrorKind::NotFound:
            return 2;
        case ErrorKind::Integrity:
            return 3;
        default:
            return 1;
    }
}

}  // namespace primerange
