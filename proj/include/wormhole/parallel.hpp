#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wormhole {

/// Applies fn to 0..n-1 on a small thread pool; results land at their input
/// index, so output order is independent of scheduling. fn must not throw.
template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn, unsigned threads = 0) {
    if (n == 0) return;
    unsigned hw = threads ? threads : std::thread::hardware_concurrency();
    if (hw <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
        pool.emplace_back([t, hw, n, &fn] {
            for (std::size_t i = t; i < n; i += hw) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wormhole
