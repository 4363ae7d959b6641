#ifndef CONEWAVE_PARALLEL_HPP
#define CONEWAVE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace conewave {

// Thread count from CONEWAVE_THREADS (>=1), else hardware concurrency.
unsigned thread_count();

// Runs fn(i) for i in [0, n).  Each index owns its output slot, so results
// are byte-identical for any thread count.  Exceptions are rethrown on the
// calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace conewave

#endif
