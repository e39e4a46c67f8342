#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/distance_matrix.hpp"

namespace distmat {

// Position of (row, col) in the strict upper triangle flattened row-major.
// Bijective onto [0, n(n-1)/2) over 0 <= row < col < n.
inline index_t condensed_index(index_t row, index_t col, index_t n) {
    if (!(row >= 0 && row < col && col < n))
        throw std::invalid_argument("condensed_index requires 0 <= row < col < n, got (" +
                                    std::to_string(row) + ", " + std::to_string(col) + ", " +
                                    std::to_string(n) + ")");
    return row * (n - 1) - row * (row - 1) / 2 + (col - row - 1);
}

inline index_t condensed_size(index_t n) { return n * (n - 1) / 2; }

// Strict upper triangle of a symmetric matrix, flattened row-major.
template <typename T>
struct CondensedVector {
    index_t n = 0;
    std::vector<T> values;
};

template <typename T>
CondensedVector<T> condensed_form(const DistanceMatrix<T>& mat) {
    detail::require_validated(mat, "condensed_form");
    const index_t n = mat.n();
    CondensedVector<T> out;
    out.n = n;
    out.values.resize(static_cast<std::size_t>(condensed_size(n)));
    const T* data = mat.data().data();
    std::size_t idx = 0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j) out.values[idx++] = data[i * n + j];
    return out;
}

}  // namespace distmat
