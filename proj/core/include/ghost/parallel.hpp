#pragma once

#include <cstddef>
#include <functional>

namespace ghost {

/// Worker count used when a caller passes 0.
unsigned default_workers() noexcept;

/// Calls body(b) for every block b in [0, blocks) using at most `workers`
/// threads. Blocks are independent; callers keep per-block results and merge
/// them in block order so output never depends on the worker count.
/// The first exception thrown by any block is rethrown on the caller.
void parallel_blocks(std::size_t blocks, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace ghost
