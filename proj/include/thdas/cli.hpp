#pragma once

#include <atomic>
#include <iosfwd>

namespace thdas {

/// Raised by the SIGINT/SIGTERM handler of the executable; long-running
/// subcommands poll it.
std::atomic<bool>& cli_stop_flag();

/// Entry point behind the `thdas` executable. Exit codes: 0 success, 1 domain
/// error (bad data, out of range, tolerance exceeded, I/O), 2 usage or
/// configuration error. Data products go to files or `out`; diagnostics to
/// `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thdas
