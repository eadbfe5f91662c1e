#pragma once

#include <cstddef>

namespace equiframe {

// Worker count for parallel sections: EQUIFRAME_THREADS if set (clamped to
// [1, 256]), otherwise the hardware concurrency, never less than 1.
std::size_t effective_thread_count();

}  // namespace equiframe
