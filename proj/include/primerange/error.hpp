#pragma once

#include <stdexcept>
#include <string>

namespace primerange {

enum class ErrorKind {
    Domain,          // input outside an operation's mathematical domain
    RangeTooLarge,   // x² (or n) would not fit the 64-bit guard
    SingularDesign,  // regression has no spread in the regressor
    Validation,      // malformed or inconsistent data
    HeaderMismatch,
    NonMonotonic,
    SquareMismatch,
    Gap,
    Io,
    NotFound,
    Integrity,       // checkpoint or digest mismatch
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// CLI exit-code contract: 1 validation/domain, 2 I/O, 3 integrity.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace primerange
