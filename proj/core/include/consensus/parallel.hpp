#pragma once

#include <functional>

namespace consensus {

// Worker cap for grid sweeps and restart loops. Defaults to the hardware
// concurrency; the CONSENSUS_RESPONSE_THREADS environment variable or an
// explicit set_thread_cap override it. Results never depend on the cap.
int thread_cap();
void set_thread_cap(int n);

// Run f(i) for i in [0, n) across at most thread_cap() workers. Exceptions
// are captured and the first one rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace consensus
