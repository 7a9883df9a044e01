#pragma once

#include <cstddef>
#include <functional>

namespace stokesim {

/// Set the worker count used by parallel loops (0 = hardware concurrency).
void set_max_threads(int n);
int max_threads();

/// Run fn over contiguous index blocks covering [0, n).  Every output element
/// is owned by exactly one block and inner reductions run in fixed index
/// order, so results are bit-identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &fn);

} // namespace stokesim
