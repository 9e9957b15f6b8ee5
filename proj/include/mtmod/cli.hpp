#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtmod {

/// Exit codes: 0 success, 1 runtime failure or partial transport failure,
/// 2 usage error (unknown subcommand, flag or relation name).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtmod
