#pragma once

namespace twistleaf::cli {

/// Parses the command line, runs one subcommand and writes its output.
/// Returns the process exit status (0 pass, 1 failed checks, 2 bad input).
int run_app(int argc, char** argv);

}  // namespace twistleaf::cli
