#pragma once

namespace pfspec {

// Subcommands: splitting | spectrum | scan | check.
// Exit codes: 0 success / all checks pass, 1 numerical failure, 2 bad config.
int run_cli(int argc, char** argv);

}  // namespace pfspec
