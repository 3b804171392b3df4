#pragma once

namespace mngu {

// Full command-line entry point: parses argv, dispatches the subcommand, and
// maps errors to exit codes (0 ok, 2 config/usage, 3 divergence, 4 I/O).
int run_cli(int argc, const char* const* argv);

}  // namespace mngu
