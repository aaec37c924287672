#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msl::cli {

// Runs one command. Exit codes: 0 success, 1 input or runtime error, 2 failed certificate.
// Reports go to --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace msl::cli
