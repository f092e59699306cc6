#pragma once

namespace hnls {

/// Keeps freed multi-megabyte blocks (2D jets) in the heap instead of handing
/// them back to the kernel after every step. No-op outside glibc. Call once
/// from main; it changes process-wide allocator settings.
void keep_large_blocks();

}  // namespace hnls
