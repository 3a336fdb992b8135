#pragma once

#include <cstddef>
#include <functional>

namespace vrs {

/// Worker cap from the VRS_SIM_THREADS environment variable.
/// Unset or 0 means auto (hardware concurrency).
std::size_t configured_thread_count();

/// Run fn(i) for i in [0, n) across worker threads with a static block
/// partition. Each index writes only its own output slot, so results are
/// bit-identical to a sequential loop regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vrs
