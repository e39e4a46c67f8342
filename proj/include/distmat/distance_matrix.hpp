#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/parallel.hpp"

namespace distmat {

// Result of a symmetry + hollowness scan. first_violation is a diagnostic:
// it is the first violation in the scan order of whichever implementation
// produced the report, and is only guaranteed to be the earliest one when
// the scan ran single-threaded.
struct ValidationReport {
    bool is_symmetric = false;
    bool is_hollow = false;
    std::optional<std::pair<index_t, index_t>> first_violation;

    bool ok() const { return is_symmetric && is_hollow; }
};

// Dense n-by-n row-major distance matrix with sample labels. Immutable after
// construction and safe to share across threads. The validated flag records
// that a symmetry + hollowness scan passed; copies keep the flag so copying
// never triggers a re-scan.
template <typename T>
class DistanceMatrix {
public:
    DistanceMatrix(index_t n, std::vector<T> data, std::vector<std::string> ids)
        : n_(n), data_(std::move(data)), ids_(std::move(ids)) {
        if (n_ < 1) throw DimensionError("distance matrix requires n >= 1");
        if (static_cast<index_t>(data_.size()) != n_ * n_)
            throw DimensionError("data length " + std::to_string(data_.size()) +
                                 " does not match n*n = " + std::to_string(n_ * n_));
        if (static_cast<index_t>(ids_.size()) != n_)
            throw LabelError("expected " + std::to_string(n_) + " ids, got " +
                             std::to_string(ids_.size()));
        std::unordered_set<std::string> seen;
        for (const auto& id : ids_)
            if (!seen.insert(id).second) throw LabelError("duplicate id: " + id);
    }

    DistanceMatrix(index_t n, std::vector<T> data)
        : DistanceMatrix(n, std::move(data), default_ids(n)) {}

    index_t n() const { return n_; }
    std::span<const T> data() const { return data_; }
    const std::vector<std::string>& ids() const { return ids_; }
    T operator()(index_t i, index_t j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

    bool is_validated() const { return validated_; }

    // Records that validation passed (or that the caller vouches for the
    // buffer, e.g. it was synthesized symmetric and hollow by construction).
    void mark_validated() { validated_ = true; }

private:
    static std::vector<std::string> default_ids(index_t n) {
        std::vector<std::string> ids;
        ids.reserve(n > 0 ? static_cast<std::size_t>(n) : 0);
        for (index_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
        return ids;
    }

    index_t n_ = 0;
    std::vector<T> data_;
    std::vector<std::string> ids_;
    bool validated_ = false;
};

namespace detail {

inline void require_square(index_t rows, index_t cols, std::size_t len) {
    if (rows != cols)
        throw DimensionError("validation requires a square buffer, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    if (rows < 1) throw DimensionError("validation requires n >= 1");
    if (len != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw DimensionError("buffer length does not match its declared shape");
}

}  // namespace detail

// Reference validation: one full symmetry pass over the whole buffer, then a
// full pass over the diagonal. Sequential whole-matrix scans; the baseline
// the tiled version is benchmarked against. Comparisons are exact when
// tol == 0 (inputs are expected to be finite).
template <typename T>
ValidationReport validate_naive(std::span<const T> data, index_t rows, index_t cols, T tol = T(0)) {
    detail::require_square(rows, cols, data.size());
    const index_t n = rows;
    ValidationReport rep;
    rep.is_symmetric = true;
    rep.is_hollow = true;
    for (index_t i = 0; i < n && rep.is_symmetric; ++i) {
        for (index_t j = 0; j < n; ++j) {
            if (!(std::abs(data[i * n + j] - data[j * n + i]) <= tol)) {
                rep.is_symmetric = false;
                if (!rep.first_violation) rep.first_violation = {i, j};
                break;
            }
        }
    }
    for (index_t i = 0; i < n; ++i) {
        if (!(std::abs(data[i * n + i]) <= tol)) {
            rep.is_hollow = false;
            if (!rep.first_violation) rep.first_violation = {i, i};
            break;
        }
    }
    return rep;
}

template <typename T>
ValidationReport validate_naive(const DistanceMatrix<T>& mat, T tol = T(0)) {
    return validate_naive(mat.data(), mat.n(), mat.n(), tol);
}

namespace detail {

// Scans the tile-rows [trow_begin, trow_end) of the tile grid, fusing the
// symmetry check with the diagonal-zero check on diagonal tiles. Stops a
// check once its flag is false; stops entirely once both are.
template <typename T>
ValidationReport validate_tile_rows(const T* data, index_t n, index_t tile, T tol,
                                    index_t trow_begin, index_t trow_end) {
    ValidationReport rep;
    rep.is_symmetric = true;
    rep.is_hollow = true;
    auto note = [&](index_t r, index_t c) {
        if (!rep.first_violation) rep.first_violation = {r, c};
    };
    for (index_t tr = trow_begin; tr < trow_end; ++tr) {
        const index_t trow = tr * tile;
        const index_t trow_max = std::min(trow + tile, n);
        for (index_t tcol = 0; tcol < n; tcol += tile) {
            const index_t tcol_max = std::min(tcol + tile, n);
            if (rep.is_symmetric) {
                for (index_t row = trow; row < trow_max && rep.is_symmetric; ++row) {
                    for (index_t col = tcol; col < tcol_max; ++col) {
                        if (!(std::abs(data[row * n + col] - data[col * n + row]) <= tol)) {
                            rep.is_symmetric = false;
                            note(row, col);
                            break;
                        }
                    }
                }
            }
            if (trow == tcol && rep.is_hollow) {  // diagonal tile
                for (index_t col = tcol; col < tcol_max; ++col) {
                    if (!(std::abs(data[col * n + col]) <= tol)) {
                        rep.is_hollow = false;
                        note(col, col);
                        break;
                    }
                }
            }
            if (!rep.is_symmetric && !rep.is_hollow) return rep;
        }
    }
    return rep;
}

}  // namespace detail

// Tiled validation fusing the symmetry scan with the diagonal-zero check.
// Flags always equal validate_naive on the same buffer. Parallel runs
// partition tile-rows across workers and AND the per-worker flags; the
// reported violation then comes from the earliest worker block.
template <typename T>
ValidationReport validate_tiled(std::span<const T> data, index_t rows, index_t cols,
                                index_t tile = kDefaultTile, T tol = T(0), int threads = 0) {
    detail::require_square(rows, cols, data.size());
    if (tile < 1) throw std::invalid_argument("tile must be >= 1");
    const index_t n = rows;
    const index_t n_tile_rows = (n + tile - 1) / tile;
    const int workers = effective_threads(threads);
    if (workers <= 1 || n_tile_rows <= 1)
        return detail::validate_tile_rows(data.data(), n, tile, tol, 0, n_tile_rows);

    std::vector<ValidationReport> partial(
        static_cast<std::size_t>(std::min<index_t>(workers, n_tile_rows)));
    parallel_blocks(n_tile_rows, workers, [&](int block, index_t begin, index_t end) {
        partial[static_cast<std::size_t>(block)] =
            detail::validate_tile_rows(data.data(), n, tile, tol, begin, end);
    });
    ValidationReport rep;
    rep.is_symmetric = true;
    rep.is_hollow = true;
    for (const auto& p : partial) {
        rep.is_symmetric = rep.is_symmetric && p.is_symmetric;
        rep.is_hollow = rep.is_hollow && p.is_hollow;
        if (!rep.first_violation && p.first_violation) rep.first_violation = p.first_violation;
    }
    return rep;
}

template <typename T>
ValidationReport validate_tiled(const DistanceMatrix<T>& mat, index_t tile = kDefaultTile,
                                T tol = T(0), int threads = 0) {
    return validate_tiled(mat.data(), mat.n(), mat.n(), tile, tol, threads);
}

// Runs the tiled scan and marks the matrix validated when it passes.
template <typename T>
ValidationReport validate(DistanceMatrix<T>& mat, index_t tile = kDefaultTile, T tol = T(0),
                          int threads = 0) {
    ValidationReport rep = validate_tiled(mat, tile, tol, threads);
    if (rep.ok()) mat.mark_validated();
    return rep;
}

namespace detail {

template <typename T>
void require_validated(const DistanceMatrix<T>& mat, const char* op) {
    if (!mat.is_validated())
        throw ValidationRequiredError(std::string(op) +
                                      " requires a validated matrix; run validate() first");
}

}  // namespace detail

}  // namespace distmat
