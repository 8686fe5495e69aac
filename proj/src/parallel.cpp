#include "resetgeo/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace resetgeo {

int max_threads() {
  if (const char* env = std::getenv("RESETGEO_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // fall through to the runtime default
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void serial_for(int n, const std::function<void(int)>& f) {
  for (int i = 0; i < n; ++i) f(i);
}

void parallel_for(int n, const std::function<void(int)>& f, bool force_serial) {
  if (force_serial || n < 2) {
    serial_for(n, f);
    return;
  }
#ifdef _OPENMP
  const int threads = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) f(i);
#else
  serial_for(n, f);
#endif
}

}  // namespace resetgeo
