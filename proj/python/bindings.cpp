#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "distmat/distmat.hpp"

namespace py = pybind11;

namespace {

using distmat::index_t;

using Array2d = py::array_t<double, py::array::c_style | py::array::forcecast>;

distmat::DistanceMatrix<double> matrix_from_array(const Array2d& arr) {
    auto buf = arr.request();
    if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
        throw std::invalid_argument("expected a square 2-D array");
    const auto n = static_cast<index_t>(buf.shape[0]);
    const double* data = static_cast<const double*>(buf.ptr);
    return distmat::DistanceMatrix<double>(
        n, std::vector<double>(data, data + static_cast<std::size_t>(n) * n));
}

distmat::DistanceMatrix<double> validated_matrix(const Array2d& arr, bool skip_validation,
                                                 index_t tile, int threads) {
    auto mat = matrix_from_array(arr);
    if (skip_validation) {
        mat.mark_validated();
        return mat;
    }
    auto rep = distmat::validate(mat, tile, 0.0, threads);
    if (!rep.ok()) {
        std::string msg = "matrix failed validation (symmetric: ";
        msg += rep.is_symmetric ? "true" : "false";
        msg += ", hollow: ";
        msg += rep.is_hollow ? "true" : "false";
        msg += ")";
        throw std::invalid_argument(msg);
    }
    return mat;
}

py::array_t<double> square_array(const std::vector<double>& data, index_t n) {
    py::array_t<double> out({n, n});
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

py::object py_validate(const Array2d& arr, bool naive, index_t tile, double tolerance,
                       int threads) {
    auto mat = matrix_from_array(arr);
    distmat::ValidationReport rep;
    {
        py::gil_scoped_release release;
        rep = naive ? distmat::validate_naive(mat, tolerance)
                    : distmat::validate_tiled(mat, tile, tolerance, threads);
    }
    py::dict out;
    out["is_symmetric"] = rep.is_symmetric;
    out["is_hollow"] = rep.is_hollow;
    out["first_violation"] =
        rep.first_violation
            ? py::object(py::make_tuple(rep.first_violation->first, rep.first_violation->second))
            : py::object(py::none());
    return out;
}

py::array_t<double> py_center(const Array2d& arr, bool naive, index_t tile, int threads,
                              bool skip_validation) {
    auto mat = validated_matrix(arr, skip_validation, tile, threads);
    distmat::CenteredMatrix<double> centered;
    {
        py::gil_scoped_release release;
        centered = naive ? distmat::center_naive(mat) : distmat::center_fused(mat, tile, threads);
    }
    return square_array(centered.data, centered.n);
}

py::object py_pcoa(const Array2d& arr, std::optional<index_t> axes, bool naive, index_t tile,
                   int threads, bool skip_validation) {
    auto mat = validated_matrix(arr, skip_validation, tile, threads);
    distmat::PcoaOptions<double> opts;
    opts.axes = axes;
    opts.tile = tile;
    opts.threads = threads;
    opts.naive_centering = naive;
    distmat::PcoaResult<double> res;
    {
        py::gil_scoped_release release;
        res = distmat::pcoa(mat, opts);
    }
    py::array_t<double> eigenvalues(res.eigenvalues.size());
    std::copy(res.eigenvalues.begin(), res.eigenvalues.end(), eigenvalues.mutable_data());
    py::array_t<double> coordinates({res.n, res.axes});
    std::copy(res.coordinates.begin(), res.coordinates.end(), coordinates.mutable_data());
    py::array_t<double> proportion(res.proportion_explained.size());
    std::copy(res.proportion_explained.begin(), res.proportion_explained.end(),
              proportion.mutable_data());
    py::dict out;
    out["eigenvalues"] = eigenvalues;
    out["coordinates"] = coordinates;
    out["proportion_explained"] = proportion;
    out["negative_eigenvalue_warning"] = res.negative_eigenvalue_warning;
    return out;
}

py::object py_mantel(const Array2d& x, const Array2d& y, index_t permutations,
                     std::uint64_t seed, bool naive, index_t tile, int threads,
                     bool skip_validation) {
    auto mx = validated_matrix(x, skip_validation, tile, threads);
    auto my = validated_matrix(y, skip_validation, tile, threads);
    distmat::MantelResult<double> res;
    {
        py::gil_scoped_release release;
        auto perms = distmat::make_permutations(mx.n(), permutations, seed, threads);
        res = naive ? distmat::mantel_naive(mx, my, perms)
                    : distmat::mantel_fused(mx, my, perms, tile, threads);
    }
    py::array_t<double> stats(res.permuted_stats.size());
    std::copy(res.permuted_stats.begin(), res.permuted_stats.end(), stats.mutable_data());
    py::dict out;
    out["statistic"] = res.orig_stat;
    out["p_value"] = res.p_value;
    out["permutations"] = res.permutations;
    out["permuted_stats"] = stats;
    return out;
}

py::array_t<double> py_condensed_form(const Array2d& arr, bool skip_validation, index_t tile,
                                      int threads) {
    auto mat = validated_matrix(arr, skip_validation, tile, threads);
    auto cond = distmat::condensed_form(mat);
    py::array_t<double> out(cond.values.size());
    std::copy(cond.values.begin(), cond.values.end(), out.mutable_data());
    return out;
}

py::array_t<std::int32_t> py_make_permutations(index_t n, index_t k, std::uint64_t seed,
                                               int threads) {
    auto perms = distmat::make_permutations(n, k, seed, threads);
    py::array_t<std::int32_t> out({k, n});
    std::copy(perms.table().begin(), perms.table().end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cache-aware distance matrix operations";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const distmat::NumericError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        } catch (const distmat::Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("validate", &py_validate, py::arg("matrix"), py::arg("naive") = false,
          py::arg("tile") = distmat::kDefaultTile, py::arg("tolerance") = 0.0,
          py::arg("threads") = 0,
          "Check that a square matrix is symmetric and hollow.");

    m.def("center", &py_center, py::arg("matrix"), py::arg("naive") = false,
          py::arg("tile") = distmat::kDefaultTile, py::arg("threads") = 0,
          py::arg("skip_validation") = false,
          "Gower double-centering of a distance matrix.");

    m.def("pcoa", &py_pcoa, py::arg("matrix"), py::arg("axes") = py::none(),
          py::arg("naive") = false, py::arg("tile") = distmat::kDefaultTile,
          py::arg("threads") = 0, py::arg("skip_validation") = false,
          "Principal coordinates analysis of a distance matrix.");

    m.def("mantel", &py_mantel, py::arg("x"), py::arg("y"), py::arg("permutations") = 999,
          py::arg("seed") = 0, py::arg("naive") = false, py::arg("tile") = distmat::kDefaultTile,
          py::arg("threads") = 0, py::arg("skip_validation") = false,
          "Mantel permutation test between two distance matrices.");

    m.def("condensed_form", &py_condensed_form, py::arg("matrix"),
          py::arg("skip_validation") = false, py::arg("tile") = distmat::kDefaultTile,
          py::arg("threads") = 0,
          "Strict upper triangle flattened row-major.");

    m.def("condensed_index", &distmat::condensed_index, py::arg("row"), py::arg("col"),
          py::arg("n"), "Position of (row, col) in the condensed vector.");

    m.def("make_permutations", &py_make_permutations, py::arg("n"), py::arg("k"),
          py::arg("seed"), py::arg("threads") = 0,
          "k seeded permutations of 0..n-1, one per row.");

    m.attr("__version__") = "0.1.0";
}
