#pragma once

namespace takeover {

/// Entry point of the command line tool, callable from tests.
/// Exit codes: 0 success, 1 spec validation failure, 2 solver failure,
/// 3 verification failure.
int cli_main(int argc, const char* const* argv);

}  // namespace takeover
