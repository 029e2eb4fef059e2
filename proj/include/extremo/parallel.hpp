#pragma once

#include <cstddef>
#include <functional>

namespace extremo {

/**
 * Run work(i) for i = 0..count-1 on up to `threads` workers (0 = hardware
 * concurrency). Tasks are claimed from an atomic counter; callers own all
 * determinism, so work(i) must depend only on i. The first exception thrown
 * by any task is rethrown after all workers join.
 */
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& work);

}  // namespace extremo
