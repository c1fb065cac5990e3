#pragma once

#include <cstddef>
#include <functional>

namespace regge {

// Bounded worker pool used for pure element-wise maps. Each index is
// processed exactly once and results land in caller-preallocated slots,
// so the output is identical for any worker count.
void set_worker_count(int workers);
int worker_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace regge
