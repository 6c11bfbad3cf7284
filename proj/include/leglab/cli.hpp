#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leglab {

// Runs one leglab subcommand (arguments after the program name). Returns 0
// for pass, 1 for fail, 2 for inconclusive results and usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leglab
