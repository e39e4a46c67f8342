#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "distmat/common.hpp"

namespace distmat {

// Eigendecomposition of a symmetric matrix. eigenvalues come back ascending;
// eigenvectors[a*n + i] is component i of the eigenvector paired with
// eigenvalues[a].
template <typename T>
struct SymmetricEigenResult {
    std::vector<T> eigenvalues;
    std::vector<T> eigenvectors;
};

// Pluggable solver contract: input is a symmetric n×n row-major buffer.
// The default backend is a dense exact solver; an approximate randomized
// backend can be swapped in without touching the callers.
template <typename T>
using SymmetricEigenFn =
    std::function<SymmetricEigenResult<T>(std::span<const T>, index_t)>;

template <typename T>
SymmetricEigenResult<T> dense_symmetric_eigen(std::span<const T> data, index_t n) {
    using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Matrix> m(data.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericError("dense symmetric eigensolver failed to converge (status " +
                           std::to_string(static_cast<int>(solver.info())) + ", n = " +
                           std::to_string(n) + ")");
    SymmetricEigenResult<T> result;
    result.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    result.eigenvectors.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (index_t a = 0; a < n; ++a)
        for (index_t i = 0; i < n; ++i)
            result.eigenvectors[static_cast<std::size_t>(a * n + i)] = solver.eigenvectors()(i, a);
    return result;
}

}  // namespace distmat
