#pragma once

// Deterministic parallel loops and reductions.

#include <cstddef>
#include <functional>
#include <vector>

namespace layerpot {

/// Worker count: set_thread_count if called with n > 0, else LAYERPOT_THREADS,
/// else the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Calls fn(i) for i in [0, n) on static contiguous chunks. The first
/// exception (lowest chunk) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Pairwise summation in a fixed order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace layerpot
