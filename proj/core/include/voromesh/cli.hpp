#pragma once

#include <string>
#include <vector>

namespace voromesh {

/// Command line front end. Subcommands: grid build, patterns generate,
/// patterns verify, dual assemble, verify gauss, verify oracle,
/// advect cone, analyze fluxcount, analyze census.
/// Returns 0 on success, 1 on verification/runtime failure, 2 on usage
/// errors. `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace voromesh
