#pragma once
// Deterministic parallel helpers.
//
// All parallel sums in this project follow the same discipline: the work is
// cut into chunks along a fixed index grid, each chunk is accumulated
// sequentially, and the chunk results are combined by a pairwise tree whose
// shape depends only on the chunk count.  The result is therefore
// bit-identical for any worker count.

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace wgsum {

// Process-wide worker count; 0 means "use hardware_concurrency".
int worker_count();
void set_worker_count(int n);

// Runs fn(i) for i in [0, n).  Tasks are claimed from a shared counter, so
// scheduling is nondeterministic, but each result lands in its own slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Pairwise tree reduction: adjacent pairs are summed level by level.
// Returns {sum, depth}.  Depth is the number of levels (0 for n <= 1).
template <typename T>
std::pair<T, int> pairwise_reduce(std::vector<T> v) {
    if (v.empty()) return {T{}, 0};
    int depth = 0;
    while (v.size() > 1) {
        std::size_t half = (v.size() + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) {
            if (2 * i + 1 < v.size())
                v[i] = v[2 * i] + v[2 * i + 1];
            else
                v[i] = v[2 * i];
        }
        v.resize(half);
        ++depth;
    }
    return {v[0], depth};
}

constexpr std::size_t kChunkTerms = 1u << 16; // terms per reduction chunk

} // namespace wgsum
