#pragma once

#include <cstddef>
#include <functional>

namespace acaforge {

/// Worker cap: ACAFORGE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t thread_budget();

/// Calls fn(0..n-1) on up to thread_budget() threads. The exception from
/// the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace acaforge
