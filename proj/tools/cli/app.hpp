#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace loadshift::cli {

// Parses arguments (args[0] is the program name), runs the subcommand and
// returns its exit code. Errors are reported on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loadshift::cli
