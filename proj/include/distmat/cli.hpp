#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace distmat {

// Exit codes: 0 success, 1 validation or checksum failure, 2 usage/parse
// errors, 3 numeric errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace distmat
