#pragma once

#include <functional>

namespace sunsky {

/// Number of worker threads used by row-parallel operations. 0 means
/// std::thread::hardware_concurrency().
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Calls fn(row) for every row in [0, rows). Rows are split into contiguous
/// chunks, one per worker; fn must only write state owned by its row.
void parallel_rows(int rows, const std::function<void(int)>& fn);

}  // namespace sunsky
