#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/distance_matrix.hpp"
#include "distmat/parallel.hpp"

namespace distmat {

// Gower double-centered matrix: data[i][j] = E[i][j] - rowmean(E)[i]
// - colmean(E)[j] + mean(E) with E = -D∘D/2. For a symmetric D the column
// means of E equal its row means, so only row_means is kept.
template <typename T>
struct CenteredMatrix {
    index_t n = 0;
    std::vector<T> data;       // n*n row-major
    std::vector<T> row_means;  // row means of E
    T global_mean = T(0);      // mean of E
};

// Reference centering: sequential whole-matrix passes with materialized
// intermediates, no fusion. This is the oracle the fused kernel is checked
// against and the baseline the bench harness times. The subtraction of the
// two means happens in one elementwise pass, grouped (rm[i] + cm[j]), which
// keeps the output exactly symmetric for symmetric input.
template <typename T>
CenteredMatrix<T> center_naive(const DistanceMatrix<T>& mat, bool allow_unvalidated = false) {
    if (!allow_unvalidated) detail::require_validated(mat, "center_naive");
    const index_t n = mat.n();
    const std::size_t len = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    const T* d = mat.data().data();

    // pass 1: E = D*D/-2
    std::vector<T> e(len);
    for (std::size_t i = 0; i < len; ++i) e[i] = d[i] * d[i] / T(-2);

    // pass 2: row means
    std::vector<T> row_means(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        T sum = T(0);
        for (index_t j = 0; j < n; ++j) sum += e[i * n + j];
        row_means[static_cast<std::size_t>(i)] = sum / static_cast<T>(n);
    }

    // pass 3: column means (row-major sweep accumulating per-column sums)
    std::vector<T> col_means(static_cast<std::size_t>(n), T(0));
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) col_means[static_cast<std::size_t>(j)] += e[i * n + j];
    for (index_t j = 0; j < n; ++j) col_means[static_cast<std::size_t>(j)] /= static_cast<T>(n);

    // pass 4: global mean
    T total = T(0);
    for (std::size_t i = 0; i < len; ++i) total += e[i];
    const T global_mean = total / static_cast<T>(n * n);

    // pass 5: E - (row mean + column mean)
    std::vector<T> tmp(len);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            tmp[i * n + j] = e[i * n + j] - (row_means[static_cast<std::size_t>(i)] +
                                             col_means[static_cast<std::size_t>(j)]);

    // pass 6: + global mean
    std::vector<T> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = tmp[i] + global_mean;

    return CenteredMatrix<T>{n, std::move(out), std::move(row_means), global_mean};
}

namespace detail {

template <typename T>
struct CenteringMeans {
    std::vector<T> row_means;
    T global_mean = T(0);
};

// Pass 1 of the fused kernel: overwrite buf with E = -D∘D/2 while
// accumulating row sums, row means, and the global mean in the same sweep.
// The global sum reduces per-block partials in block order, which is row
// order when single-threaded.
template <typename T>
CenteringMeans<T> e_matrix_means(const T* d, T* buf, index_t n, int workers) {
    CenteringMeans<T> means;
    means.row_means.resize(static_cast<std::size_t>(n));
    const int nblocks = static_cast<int>(std::min<index_t>(workers, n));
    std::vector<T> block_sums(static_cast<std::size_t>(std::max(nblocks, 1)), T(0));
    parallel_blocks(n, workers, [&](int block, index_t begin, index_t end) {
        T block_sum = T(0);
        for (index_t row = begin; row < end; ++row) {
            T row_sum = T(0);
            for (index_t col = 0; col < n; ++col) {
                const T val = d[row * n + col];
                const T val2 = T(-0.5) * val * val;
                buf[row * n + col] = val2;
                row_sum += val2;
            }
            block_sum += row_sum;
            means.row_means[static_cast<std::size_t>(row)] = row_sum / static_cast<T>(n);
        }
        block_sums[static_cast<std::size_t>(block)] = block_sum;
    });
    T global_sum = T(0);
    for (T s : block_sums) global_sum += s;
    means.global_mean = (global_sum / static_cast<T>(n)) / static_cast<T>(n);
    return means;
}

// Pass 2: tiled in-place update. row_means doubles as the column means, so
// the tile pattern keeps both the row slice and the mean slice hot.
template <typename T>
void f_matrix_inplace(std::span<const T> row_means, T global_mean, T* buf, index_t n,
                      index_t tile, int workers) {
    const index_t n_tile_rows = (n + tile - 1) / tile;
    parallel_blocks(n_tile_rows, workers, [&](int, index_t tr_begin, index_t tr_end) {
        for (index_t tr = tr_begin; tr < tr_end; ++tr) {
            const index_t trow = tr * tile;
            const index_t trow_max = std::min(trow + tile, n);
            for (index_t tcol = 0; tcol < n; tcol += tile) {
                const index_t tcol_max = std::min(tcol + tile, n);
                for (index_t row = trow; row < trow_max; ++row) {
                    const T gr_mean = global_mean - row_means[static_cast<std::size_t>(row)];
                    T* out = buf + row * n;
                    for (index_t col = tcol; col < tcol_max; ++col)
                        out[col] += gr_mean - row_means[static_cast<std::size_t>(col)];
                }
            }
        }
    });
}

}  // namespace detail

// Fused centering over a caller-provided scratch buffer: buf holds the
// distances on entry and the centered matrix on return. Two passes total.
template <typename T>
detail::CenteringMeans<T> center_fused_inplace(std::span<T> buf, index_t n,
                                               index_t tile = kDefaultTile, int threads = 0) {
    if (n < 1) throw DimensionError("centering requires n >= 1");
    if (buf.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw DimensionError("buffer length does not match n*n");
    if (tile < 1) throw std::invalid_argument("tile must be >= 1");
    const int workers = effective_threads(threads);
    auto means = detail::e_matrix_means(buf.data(), buf.data(), n, workers);
    detail::f_matrix_inplace<T>(means.row_means, means.global_mean, buf.data(), n, tile, workers);
    return means;
}

// Fused, symmetric-aware centering. Pass 1 reads the distances and writes
// the freshly allocated output, pass 2 updates it in place. Matches
// center_naive within floating tolerance for every tile size and thread
// count.
template <typename T>
CenteredMatrix<T> center_fused(const DistanceMatrix<T>& mat, index_t tile = kDefaultTile,
                               int threads = 0, bool allow_unvalidated = false) {
    if (!allow_unvalidated) detail::require_validated(mat, "center_fused");
    if (tile < 1) throw std::invalid_argument("tile must be >= 1");
    const index_t n = mat.n();
    std::vector<T> buf(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    const int workers = effective_threads(threads);
    auto means = detail::e_matrix_means(mat.data().data(), buf.data(), n, workers);
    detail::f_matrix_inplace<T>(means.row_means, means.global_mean, buf.data(), n, tile, workers);
    return CenteredMatrix<T>{n, std::move(buf), std::move(means.row_means), means.global_mean};
}

}  // namespace distmat
