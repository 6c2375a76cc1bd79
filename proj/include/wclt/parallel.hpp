#pragma once

namespace wclt {

/// Caps the OpenMP worker count from WCLT_THREADS if set. Results never
/// depend on the thread count; only wall time does.
void configure_threads_from_env();

void set_thread_count(int threads);
int thread_count();

}  // namespace wclt
