#pragma once

#include <iosfwd>

namespace lgt::cli {

/// Exit codes: 0 success, 1 usage or I/O error, 2 invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lgt::cli
