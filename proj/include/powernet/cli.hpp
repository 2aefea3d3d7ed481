#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powernet::cli {

// args excludes the program name. Exit codes: 0 ok, 1 bad input, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powernet::cli
