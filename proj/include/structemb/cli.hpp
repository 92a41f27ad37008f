#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace structemb {

// Runs one command line (without the program name). Returns 0 on success,
// 1 on a usage error and 2 when the input data is rejected.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace structemb
