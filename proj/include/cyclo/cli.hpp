#pragma once

#include <cstdio>

namespace cyclo {

// Entry point of the cyclo command line tool; returns the process exit code
// (0 success, 1 failed numeric check, 2 usage error).
inline int cli_run(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fputs("cyclo: not yet wired\n", stderr);
  return 2;
}

} // namespace cyclo
