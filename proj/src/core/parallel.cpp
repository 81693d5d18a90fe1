#include "meshfield/core/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace meshfield {

void configure_threads_from_env() {
  const char* value = std::getenv("MESHFIELD_THREADS");
  if (value == nullptr) return;
  int n = 0;
  auto [ptr, ec] = std::from_chars(value, value + std::strlen(value), n);
  if (ec == std::errc() && n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace meshfield
