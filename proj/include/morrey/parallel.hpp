#pragma once

#include <cstddef>
#include <functional>

namespace morrey {

/// Environment variable that overrides any requested thread count.
inline constexpr const char* kThreadsEnv = "MORREY_THREADS";

/// Effective worker count: MORREY_THREADS if set to a positive integer,
/// otherwise `requested`, with 0 meaning the hardware concurrency.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Iterations
/// must be independent. If any iteration throws, the exception of the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace morrey
