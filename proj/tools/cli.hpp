#pragma once

#include <iosfwd>

namespace lesion::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 data, schema,
// format or numerical error, 3 compare found no significant improvement,
// 4 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNotSignificant = 3;
inline constexpr int kExitInternal = 4;

// Written paths go to out, one per line; diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lesion::cli
