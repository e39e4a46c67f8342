#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "distmat/common.hpp"

namespace distmat {

// Resolves a requested worker count. 0 means "all available": the
// DISTMAT_THREADS environment variable if set, otherwise the hardware
// concurrency. Explicit requests are honored as-is (oversubscription is
// allowed), so results tied to a thread count are reproducible anywhere.
inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DISTMAT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Splits [0, total) into `threads` contiguous blocks and runs
// fn(block_index, begin, end) for each. The partition depends only on
// (total, threads), so any reduction done in block order is deterministic
// for a fixed thread count. Workers own disjoint ranges; fn must only
// write state associated with its own range or its own block slot.
template <typename Fn>
void parallel_blocks(index_t total, int threads, Fn&& fn) {
    if (total <= 0) return;
    int nblocks = static_cast<int>(std::min<index_t>(threads, total));
    if (nblocks <= 1) {
        fn(0, index_t{0}, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nblocks) - 1);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nblocks));
    auto run = [&](int b) {
        index_t begin = total * b / nblocks;
        index_t end = total * (b + 1) / nblocks;
        try {
            fn(b, begin, end);
        } catch (...) {
            errors[static_cast<std::size_t>(b)] = std::current_exception();
        }
    };
    for (int b = 1; b < nblocks; ++b) pool.emplace_back(run, b);
    run(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace distmat
