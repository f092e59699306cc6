#include "hnls/runtime.hpp"

#include <cstdlib>  // defines __GLIBC__

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace hnls {

void keep_large_blocks() {
#if defined(__GLIBC__)
  // with the defaults every 2D jet went through mmap/munmap, and page faults
  // cost more than the arithmetic
  // glibc rejects mmap thresholds above 32 MB
  mallopt(M_MMAP_THRESHOLD, 16 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  mallopt(M_TOP_PAD, 16 << 20);
#endif
}

}  // namespace hnls
