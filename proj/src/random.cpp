#include "qcext/random.hpp"

#include <cstdlib>
#include <thread>

namespace qcext {

std::size_t thread_count() {
  if (const char* env = std::getenv("QCEXT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qcext
