#include "equiframe/threads.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace equiframe {

std::size_t effective_thread_count() {
  if (const char* env = std::getenv("EQUIFRAME_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(std::min(v, 256L));
      return 1;
    } catch (...) {
      // fall through to hardware default on unparsable values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<std::size_t>(hw);
}

}  // namespace equiframe
