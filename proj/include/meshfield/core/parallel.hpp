#pragma once

namespace meshfield {

/// Reads MESHFIELD_THREADS and caps the OpenMP worker count accordingly.
/// Unset or invalid values leave the runtime default (hardware parallelism).
void configure_threads_from_env();

int max_threads();

}  // namespace meshfield
