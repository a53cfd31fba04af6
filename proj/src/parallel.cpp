#include "wgsum/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

namespace wgsum {

static int g_workers = 0;

int worker_count() {
    if (g_workers > 0) return g_workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 8u)) : 1;
}

void set_worker_count(int n) { g_workers = n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int w = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n ? n : 1);
    if (w <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w) - 1);
    for (int t = 1; t < w; ++t) threads.emplace_back(body);
    body();
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace wgsum
