#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coso {

// Entry point of the coso command-line tool. `args` excludes the program
// name. Returns 0 on success, 1 on a domain error (message on `err`), 2 on
// a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coso
