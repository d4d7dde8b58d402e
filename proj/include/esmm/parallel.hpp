#pragma once

#include <functional>

namespace esmm {

/// Worker count: hardware concurrency capped by ESMM_THREADS.
int worker_count();

/// Runs body(lo, hi) over [0, n) in contiguous chunks. Chunking depends only
/// on n and the worker count, so reductions done per chunk stay reproducible.
void parallel_for(long n, const std::function<void(long, long)>& body);

}  // namespace esmm
