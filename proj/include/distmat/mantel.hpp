#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/condensed.hpp"
#include "distmat/distance_matrix.hpp"
#include "distmat/parallel.hpp"
#include "distmat/permutation.hpp"

namespace distmat {

// Permutation-invariant Pearson state: the mean and norm of a condensed
// matrix do not change when the matrix is jointly permuted, so they are
// computed once on the original x. (mul, add) is the affine pair with
// v*mul + add == (v - xmean)/normxm, and ynorm is y mean-centered and
// norm-normalized.
template <typename T>
struct PearsonPrecomp {
    T xmean = T(0);
    T normxm = T(0);
    T mul = T(0);  // 1/normxm
    T add = T(0);  // -xmean/normxm
    std::vector<T> ynorm;
};

// Monte-Carlo Mantel result. p_value is the two-sided
// (count(|permuted| >= |orig|) + 1) / (k + 1).
template <typename T>
struct MantelResult {
    T orig_stat = T(0);
    std::vector<T> permuted_stats;
    T p_value = T(1);
    index_t permutations = 0;
};

namespace detail {

template <typename T>
T mean_of(std::span<const T> v) {
    T sum = T(0);
    for (T x : v) sum += x;
    return sum / static_cast<T>(v.size());
}

template <typename T>
void require_pearson_input(std::span<const T> x, std::span<const T> y) {
    if (x.size() != y.size())
        throw DimensionError("pearson requires equal-length vectors, got " +
                             std::to_string(x.size()) + " and " + std::to_string(y.size()));
    if (x.size() < 2) throw DimensionError("pearson requires length >= 2");
}

}  // namespace detail

// Pearson correlation as the dot product of the mean-centered,
// norm-normalized vectors, with the intermediates materialized the way the
// black-box reference does. Constant input has zero variance and is refused.
template <typename T>
T pearson_condensed(std::span<const T> x, std::span<const T> y) {
    detail::require_pearson_input(x, y);
    const std::size_t len = x.size();
    std::vector<T> xm(len), ym(len);
    const T xmean = detail::mean_of(x);
    const T ymean = detail::mean_of(y);
    for (std::size_t i = 0; i < len; ++i) xm[i] = x[i] - xmean;
    for (std::size_t i = 0; i < len; ++i) ym[i] = y[i] - ymean;
    T normxm2 = T(0), normym2 = T(0);
    for (std::size_t i = 0; i < len; ++i) normxm2 += xm[i] * xm[i];
    for (std::size_t i = 0; i < len; ++i) normym2 += ym[i] * ym[i];
    const T normxm = std::sqrt(normxm2);
    const T normym = std::sqrt(normym2);
    if (!(normxm > T(0)) || !(normym > T(0)))
        throw NumericError("degenerate variance: constant condensed vector");
    for (std::size_t i = 0; i < len; ++i) xm[i] /= normxm;
    for (std::size_t i = 0; i < len; ++i) ym[i] /= normym;
    T dot = T(0);
    for (std::size_t i = 0; i < len; ++i) dot += xm[i] * ym[i];
    return dot;
}

template <typename T>
T pearson_condensed(const CondensedVector<T>& x, const CondensedVector<T>& y) {
    return pearson_condensed(std::span<const T>(x.values), std::span<const T>(y.values));
}

template <typename T>
PearsonPrecomp<T> make_pearson_precomp(std::span<const T> x, std::span<const T> y) {
    detail::require_pearson_input(x, y);
    const std::size_t len = x.size();
    PearsonPrecomp<T> pre;
    pre.xmean = detail::mean_of(x);
    T normxm2 = T(0);
    for (std::size_t i = 0; i < len; ++i) {
        const T c = x[i] - pre.xmean;
        normxm2 += c * c;
    }
    pre.normxm = std::sqrt(normxm2);
    const T ymean = detail::mean_of(y);
    T normym2 = T(0);
    for (std::size_t i = 0; i < len; ++i) {
        const T c = y[i] - ymean;
        normym2 += c * c;
    }
    const T normym = std::sqrt(normym2);
    if (!(pre.normxm > T(0)) || !(normym > T(0)))
        throw NumericError("degenerate variance: constant condensed vector");
    pre.mul = T(1) / pre.normxm;
    pre.add = -pre.xmean / pre.normxm;
    pre.ynorm.resize(len);
    for (std::size_t i = 0; i < len; ++i) pre.ynorm[i] = (y[i] - ymean) / normym;
    return pre;
}

// Two-sided Monte-Carlo p-value; ties at |orig| count as at least as extreme.
template <typename T>
T p_value(T orig, std::span<const T> permuted) {
    index_t count_better = 0;
    for (T s : permuted)
        if (std::abs(s) >= std::abs(orig)) ++count_better;
    return static_cast<T>(count_better + 1) / static_cast<T>(permuted.size() + 1);
}

namespace detail {

template <typename T>
void require_mantel_inputs(const DistanceMatrix<T>& x, const DistanceMatrix<T>& y,
                           const PermutationSet& perms) {
    require_validated(x, "mantel");
    require_validated(y, "mantel");
    if (x.n() != y.n())
        throw DimensionError("mantel requires matrices of equal size, got " +
                             std::to_string(x.n()) + " and " + std::to_string(y.n()));
    if (x.ids() != y.ids()) throw LabelError("mantel requires identical id ordering");
    if (x.n() < 3) throw DimensionError("mantel requires n >= 3");
    if (perms.n() != x.n())
        throw DimensionError("permutation length " + std::to_string(perms.n()) +
                             " does not match matrix size " + std::to_string(x.n()));
}

// One permuted statistic of the fused kernel: a single sweep over the strict
// upper triangle, reading x through the permuted index table and folding the
// Pearson normalization into (mul, add). ynorm is consumed sequentially;
// nothing is materialized per permutation.
template <typename T>
T mantel_perm_stat(const T* x, index_t n, std::span<const std::int32_t> order,
                   const PearsonPrecomp<T>& pre) {
    const T mul = pre.mul;
    const T add = pre.add;
    const T* ynorm = pre.ynorm.data();
    T stat = T(0);
    for (index_t row = 0; row < n - 1; ++row) {
        const index_t vrow = order[static_cast<std::size_t>(row)];
        const T* xrow = x + vrow * n;
        const index_t idx = row * (n - 1) - (row - 1) * row / 2;
        const index_t row_len = n - row - 1;
        for (index_t icol = 0; icol < row_len; ++icol) {
            const index_t col = icol + row + 1;
            const T yval = ynorm[idx + icol];
            const T xval = xrow[order[static_cast<std::size_t>(col)]] * mul + add;
            stat += yval * xval;
        }
    }
    return stat;
}

}  // namespace detail

// Black-box reference: every permutation materializes the permuted condensed
// vector and runs the full Pearson pipeline on it, recomputing mean and norm
// each time. This is the oracle for mantel_fused and the bench baseline.
template <typename T>
MantelResult<T> mantel_naive(const DistanceMatrix<T>& x, const DistanceMatrix<T>& y,
                             const PermutationSet& perms) {
    detail::require_mantel_inputs(x, y, perms);
    const index_t n = x.n();
    const CondensedVector<T> x_flat = condensed_form(x);
    const CondensedVector<T> y_flat = condensed_form(y);

    MantelResult<T> result;
    result.permutations = perms.k();
    result.orig_stat = pearson_condensed(x_flat, y_flat);
    result.permuted_stats.resize(static_cast<std::size_t>(perms.k()));

    const T* xd = x.data().data();
    std::vector<T> permuted(x_flat.values.size());
    for (index_t p = 0; p < perms.k(); ++p) {
        auto order = perms.row(p);
        std::size_t idx = 0;
        for (index_t i = 0; i < n; ++i) {
            const T* xrow = xd + static_cast<index_t>(order[static_cast<std::size_t>(i)]) * n;
            for (index_t j = i + 1; j < n; ++j)
                permuted[idx++] = xrow[order[static_cast<std::size_t>(j)]];
        }
        result.permuted_stats[static_cast<std::size_t>(p)] =
            pearson_condensed(std::span<const T>(permuted), std::span<const T>(y_flat.values));
    }
    result.p_value = p_value(result.orig_stat, std::span<const T>(result.permuted_stats));
    return result;
}

// Fused Mantel: the Pearson transform is precomputed once, then each
// permuted statistic is one pass of the permuted-dot kernel. Permutations
// are distributed across workers; each statistic accumulates sequentially
// within one worker, so the result is exactly thread-count independent.
// orig_stat is evaluated by the same kernel on the identity permutation,
// which makes identity-equivalent permutation draws tie with it exactly.
//
// The tile parameter is validated for interface uniformity with the other
// kernels but the permuted-dot sweep itself is not tiled: ynorm is already
// consumed sequentially and x is gathered through the permutation table.
template <typename T>
MantelResult<T> mantel_fused(const DistanceMatrix<T>& x, const DistanceMatrix<T>& y,
                             const PermutationSet& perms, index_t tile = kDefaultTile,
                             int threads = 0) {
    detail::require_mantel_inputs(x, y, perms);
    if (tile < 1) throw std::invalid_argument("tile must be >= 1");
    const index_t n = x.n();
    const CondensedVector<T> x_flat = condensed_form(x);
    const CondensedVector<T> y_flat = condensed_form(y);
    const PearsonPrecomp<T> pre =
        make_pearson_precomp(std::span<const T>(x_flat.values), std::span<const T>(y_flat.values));

    MantelResult<T> result;
    result.permutations = perms.k();
    result.permuted_stats.resize(static_cast<std::size_t>(perms.k()));

    const T* xd = x.data().data();
    std::vector<std::int32_t> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 0);
    result.orig_stat = detail::mantel_perm_stat(xd, n, identity, pre);

    parallel_blocks(perms.k(), effective_threads(threads), [&](int, index_t begin, index_t end) {
        for (index_t p = begin; p < end; ++p)
            result.permuted_stats[static_cast<std::size_t>(p)] =
                detail::mantel_perm_stat(xd, n, perms.row(p), pre);
    });
    result.p_value = p_value(result.orig_stat, std::span<const T>(result.permuted_stats));
    return result;
}

}  // namespace distmat
