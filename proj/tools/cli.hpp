#ifndef DCPROOF_TOOLS_CLI_HPP
#define DCPROOF_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace dcproof::cli {

// Runs one command line (without the program name). Reports go to `out` as
// key=value lines, diagnostics to `err`. Returns the exit status: 0 success,
// 1 semantic failure, 2 bad input or environment.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dcproof::cli

#endif  // DCPROOF_TOOLS_CLI_HPP
