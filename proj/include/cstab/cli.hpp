#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cstab {

// Runs one CLI invocation (args exclude the program name). Exit status:
// 0 when every executed verdict equals its registered expectation, 1 on any
// mismatch or failed simulation, 2 on usage errors (unknown case, malformed
// spec file, unwritable output path).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cstab
