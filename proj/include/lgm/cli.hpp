#pragma once

#include <string>
#include <vector>

namespace lgm {

// Full command-line driver, callable in-process (no exit(), no global state).
// args excludes the program name. Returns the process exit code:
//   0  success (and, where the command checks a property, the property holds)
//   1  the command ran but its property check failed
//   2  input, validation, or runtime error (a JSON {"error": ...} object is
//      printed to stderr)
// CLI parsing errors return CLI11's conventional codes.
int run_command(const std::vector<std::string>& args);

}  // namespace lgm
