#pragma once

namespace ziegler::cli {

/// Command-line entry point; returns the process exit code.
/// 0 success, 2 bad config/usage, 3 numeric failure, 4 I/O failure.
int run(int argc, const char* const* argv);

}  // namespace ziegler::cli
