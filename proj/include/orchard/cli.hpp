#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orchard {

/// Command-line entry point; args excludes the program name. Returns 0 on
/// success, 2 for input and usage errors, 1 for anything else.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orchard
