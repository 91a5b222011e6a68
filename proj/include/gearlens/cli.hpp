#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gearlens {

// Command-line entry point. `args` excludes the program name. Results go to
// `out`, progress and diagnostics to `err`. Returns 0 on success, 1 on a
// domain error (bad image, manifest or model), 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gearlens
