#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace penplot::cli {

enum ExitCode { ok = 0, validation_failure = 1, io_failure = 2 };

// Runs one command line (args exclude the program name). File bytes go to
// `out` only when --out is "-"; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace penplot::cli
