#pragma once

#include <iosfwd>

namespace sphere_eq {

/// Exit codes of cli_main.
enum ExitCode : int {
    exit_ok = 0,
    exit_audit_failed = 1,  // audit verdict not "pass" under --strict
    exit_usage = 2,         // bad flags, unreadable or malformed files
    exit_compute = 3,       // a solve failed to converge or diverged
};

/// Command-line entry point; `in`/`out`/`err` replace stdin/stdout/stderr for
/// the "-" path and all printing.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace sphere_eq
