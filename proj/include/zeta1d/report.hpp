#ifndef ZETA1D_REPORT_HPP
#define ZETA1D_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace zeta1d {

/// Runs a CLI invocation (argv without the program name) against the given
/// streams. Exit codes: 0 success/match, 1 MISMATCH, 2 usage error,
/// 3 insufficient data, 4 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace zeta1d

#endif
