#include "wclt/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wclt {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads >= 1) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void configure_threads_from_env() {
  const char* env = std::getenv("WCLT_THREADS");
  if (env == nullptr) return;
  try {
    const int threads = std::stoi(env);
    if (threads >= 1) set_thread_count(threads);
  } catch (const std::exception&) {
    // malformed value: keep the OpenMP default
  }
}

}  // namespace wclt
