#pragma once

#include <iosfwd>

namespace welfare {

/// Command-line entry point. Returns 0 on success, 2 on configuration errors
/// (unknown names, bad flags, out-of-domain values), 1 on other failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace welfare
