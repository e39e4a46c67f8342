#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "distmat/centering.hpp"
#include "distmat/common.hpp"
#include "distmat/distance_matrix.hpp"
#include "distmat/symmetric_eigen.hpp"

namespace distmat {

// Principal coordinates: eigenvalues of the centered matrix (descending),
// coordinates[i*axes + a] = eigenvector_a[i] * sqrt(eigenvalue_a) for the
// retained positive-eigenvalue axes, and each retained eigenvalue's share of
// the positive-eigenvalue total. Negative eigenvalues (non-Euclidean input)
// stay in the eigenvalue list but contribute no axis and no share, and set
// the warning flag.
template <typename T>
struct PcoaResult {
    std::vector<T> eigenvalues;  // length n, descending
    index_t n = 0;
    index_t axes = 0;
    std::vector<T> coordinates;  // n x axes, row-major
    std::vector<T> proportion_explained;  // length axes
    bool negative_eigenvalue_warning = false;
};

template <typename T>
struct PcoaOptions {
    std::optional<index_t> axes;  // cap on retained axes; default: all positive
    index_t tile = kDefaultTile;
    int threads = 0;
    bool naive_centering = false;
    SymmetricEigenFn<T> solver;  // empty: dense exact solver
};

template <typename T>
PcoaResult<T> pcoa(const DistanceMatrix<T>& mat, const PcoaOptions<T>& opts = {}) {
    detail::require_validated(mat, "pcoa");
    const index_t n = mat.n();
    if (n < 2) throw DimensionError("pcoa requires n >= 2");

    CenteredMatrix<T> centered = opts.naive_centering
                                     ? center_naive(mat)
                                     : center_fused(mat, opts.tile, opts.threads);
    SymmetricEigenResult<T> eig =
        opts.solver ? opts.solver(std::span<const T>(centered.data), n)
                    : dense_symmetric_eigen<T>(std::span<const T>(centered.data), n);

    // descending order
    std::vector<index_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), index_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](index_t a, index_t b) {
        return eig.eigenvalues[static_cast<std::size_t>(a)] >
               eig.eigenvalues[static_cast<std::size_t>(b)];
    });

    PcoaResult<T> result;
    result.n = n;
    result.eigenvalues.resize(static_cast<std::size_t>(n));
    for (index_t a = 0; a < n; ++a)
        result.eigenvalues[static_cast<std::size_t>(a)] =
            eig.eigenvalues[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];

    T max_abs = T(0);
    for (T v : result.eigenvalues) max_abs = std::max(max_abs, std::abs(v));
    const T zero_thresh = T(1e-12) * max_abs;  // |λ| at or below this counts as zero

    index_t positive = 0;
    T positive_sum = T(0);
    for (T v : result.eigenvalues) {
        if (v > zero_thresh) {
            ++positive;
            positive_sum += v;
        }
        if (v < -zero_thresh) result.negative_eigenvalue_warning = true;
    }

    result.axes = opts.axes ? std::min(*opts.axes, positive) : positive;
    if (result.axes < 0) throw std::invalid_argument("axes must be >= 0");

    result.coordinates.assign(
        static_cast<std::size_t>(n) * static_cast<std::size_t>(result.axes), T(0));
    result.proportion_explained.resize(static_cast<std::size_t>(result.axes));
    for (index_t a = 0; a < result.axes; ++a) {
        const index_t src = perm[static_cast<std::size_t>(a)];
        const T lambda = eig.eigenvalues[static_cast<std::size_t>(src)];
        const T scale = std::sqrt(lambda);
        const T* vec = eig.eigenvectors.data() + src * n;
        for (index_t i = 0; i < n; ++i)
            result.coordinates[static_cast<std::size_t>(i * result.axes + a)] = vec[i] * scale;
        result.proportion_explained[static_cast<std::size_t>(a)] = lambda / positive_sum;
    }
    return result;
}

}  // namespace distmat
