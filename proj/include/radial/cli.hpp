#pragma once

#include <cstddef>
#include <functional>

namespace radial {

// Command-line front end; returns the process exit code
// (0 success, 1 computational failure, 2 usage error).
int run_cli(int argc, const char* const* argv);

// Index-parallel loop over [0, n).  Worker count comes from
// RADIAL_BLOWUP_THREADS (default: hardware concurrency); output stays
// deterministic as long as job i writes only to slot/file i.  The first
// exception thrown by a job is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace radial
