#pragma once

namespace mulmatch {

// The mulmatch binary's entry point, callable in-process by tests.
// Exit codes: 0 success, 1 usage or input error, 2 internal error,
// 3 verify found a counterexample.
int cli_run(int argc, const char* const* argv);

}  // namespace mulmatch
