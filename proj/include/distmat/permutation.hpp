#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/parallel.hpp"
#include "distmat/rng.hpp"

namespace distmat {

// k permutations of 0..n-1, one per row. Rows are generated from independent
// per-row RNG streams, so the table for a given (n, k, seed) is identical no
// matter how generation was split across workers.
class PermutationSet {
public:
    PermutationSet(index_t n, std::vector<std::int32_t> order, std::uint64_t seed = 0)
        : k_(n > 0 ? static_cast<index_t>(order.size()) / n : 0),
          n_(n),
          order_(std::move(order)),
          seed_(seed) {
        if (n_ < 1) throw std::invalid_argument("permutation length must be >= 1");
        if (static_cast<index_t>(order_.size()) != k_ * n_)
            throw std::invalid_argument("permutation table size is not a multiple of n");
        std::vector<bool> seen(static_cast<std::size_t>(n_));
        for (index_t p = 0; p < k_; ++p) {
            std::fill(seen.begin(), seen.end(), false);
            for (index_t i = 0; i < n_; ++i) {
                std::int32_t v = order_[static_cast<std::size_t>(p * n_ + i)];
                if (v < 0 || v >= n_ || seen[static_cast<std::size_t>(v)])
                    throw std::invalid_argument("row " + std::to_string(p) +
                                                " is not a permutation of 0..n-1");
                seen[static_cast<std::size_t>(v)] = true;
            }
        }
    }

    index_t k() const { return k_; }
    index_t n() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const std::int32_t> row(index_t p) const {
        return {order_.data() + p * n_, static_cast<std::size_t>(n_)};
    }
    std::span<const std::int32_t> table() const { return order_; }

private:
    friend PermutationSet make_permutations(index_t, index_t, std::uint64_t, int);

    struct Unchecked {};
    PermutationSet(Unchecked, index_t k, index_t n, std::vector<std::int32_t> order,
                   std::uint64_t seed)
        : k_(k), n_(n), order_(std::move(order)), seed_(seed) {}

    index_t k_ = 0;
    index_t n_ = 0;
    std::vector<std::int32_t> order_;
    std::uint64_t seed_ = 0;
};

// Draws k uniform permutations of 0..n-1 (Fisher-Yates per row, one RNG
// stream per row). Deterministic for a given (n, k, seed) across thread
// counts. Rows are independent draws: duplicates and the identity may occur.
inline PermutationSet make_permutations(index_t n, index_t k, std::uint64_t seed,
                                        int threads = 0) {
    if (n < 1) throw std::invalid_argument("permutation length must be >= 1");
    if (k < 0) throw std::invalid_argument("permutation count must be >= 0");
    std::vector<std::int32_t> order(static_cast<std::size_t>(k * n));
    parallel_blocks(k, effective_threads(threads), [&](int, index_t begin, index_t end) {
        for (index_t p = begin; p < end; ++p) {
            std::int32_t* row = order.data() + p * n;
            std::iota(row, row + n, 0);
            auto eng = make_engine(seed, RngDomain::permutation, static_cast<std::uint64_t>(p));
            for (index_t i = n - 1; i > 0; --i) {
                index_t j = static_cast<index_t>(
                    bounded_uint(eng, static_cast<std::uint64_t>(i) + 1));
                std::swap(row[i], row[j]);
            }
        }
    });
    return PermutationSet(PermutationSet::Unchecked{}, k, n, std::move(order), seed);
}

}  // namespace distmat
