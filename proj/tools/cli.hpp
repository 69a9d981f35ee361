#pragma once

#include <ostream>

namespace primerange {

// Entry point for the `primerange` executable. Exit codes: 0 success,
// 1 validation/domain error or bad usage, 2 I/O error, 3 integrity error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primerange
