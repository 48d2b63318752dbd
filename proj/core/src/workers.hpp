#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace socdw::detail {

// requested > 0 wins; otherwise SOCDW_WORKERS, otherwise hardware concurrency.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SOCDW_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace socdw::detail
