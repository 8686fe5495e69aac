#pragma once

// OpenMP kernel layer with a serial reference path. RESETGEO_THREADS caps the
// worker count; force_serial runs the loop inline so tests can compare results
// against the parallel path.

#include <functional>

namespace resetgeo {

// Worker cap: RESETGEO_THREADS if set and positive, else the OpenMP default (1
// without OpenMP).
int max_threads();

// Runs f(i) for i in [0, n). Iterations must be independent; results must not
// depend on execution order.
void parallel_for(int n, const std::function<void(int)>& f, bool force_serial = false);

// Serial reference implementation, kept separate so benchmarks and tests can
// target it explicitly.
void serial_for(int n, const std::function<void(int)>& f);

}  // namespace resetgeo
