#pragma once

namespace levmem {

// Full command-line entry point (kept out of main() so the harness tests can
// drive it in-process). Exit codes: 0 success, 2 configuration error,
// 3 solver failure, 4 acceptance-check failure.
int cli_main(int argc, const char* const* argv);

} // namespace levmem
