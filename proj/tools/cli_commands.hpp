#pragma once

#include <string>
#include <vector>

namespace tcprio::cli {

/// Parses argv and runs the selected verb. Returns the process exit code;
/// failures print one `error kind=<kind> message="..."` line to stderr.
int run_cli(int argc, char** argv);

}  // namespace tcprio::cli
