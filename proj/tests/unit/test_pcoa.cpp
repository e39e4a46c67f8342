#include <cmath>
#include <vector>

#include "doctest.h"

#include "distmat/pcoa.hpp"
#include "test_util.hpp"

using distmat::DistanceMatrix;
using distmat::index_t;
using distmat::PcoaOptions;
using distmat::PcoaResult;

namespace {

double coordinate_distance(const PcoaResult<double>& res, index_t i, index_t j) {
    double s = 0;
    for (index_t a = 0; a < res.axes; ++a) {
        double diff = res.coordinates[static_cast<std::size_t>(i * res.axes + a)] -
                      res.coordinates[static_cast<std::size_t>(j * res.axes + a)];
        s += diff * diff;
    }
    return std::sqrt(s);
}

double centered_trace(const distmat::CenteredMatrix<double>& c) {
    double t = 0;
    for (index_t i = 0; i < c.n; ++i) t += c.data[static_cast<std::size_t>(i * c.n + i)];
    return t;
}

}  // namespace

TEST_CASE("2x2 distance-2 matrix has one positive eigenvalue and coordinates +-1") {
    DistanceMatrix<double> m(2, {0, 2, 2, 0});
    m.mark_validated();
    auto res = distmat::pcoa(m);
    REQUIRE(res.eigenvalues.size() == 2);
    CHECK(res.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(res.eigenvalues[1]) <= 1e-12);
    REQUIRE(res.axes == 1);
    // up to a global sign flip
    CHECK(std::abs(res.coordinates[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.coordinates[1] == doctest::Approx(-res.coordinates[0]).epsilon(1e-12));
    CHECK(coordinate_distance(res, 0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.proportion_explained.size() == 1);
    CHECK(res.proportion_explained[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(res.negative_eigenvalue_warning);
}

TEST_CASE("all-distance-1 3x3: eigenvalues {0.5, 0.5, 0} and a unit equilateral triangle") {
    DistanceMatrix<double> m(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
    m.mark_validated();
    auto res = distmat::pcoa(m);
    CHECK(res.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(res.eigenvalues[2]) <= 1e-12);
    REQUIRE(res.axes == 2);
    for (index_t i = 0; i < 3; ++i)
        for (index_t j = i + 1; j < 3; ++j)
            CHECK(coordinate_distance(res, i, j) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the zero matrix yields no retained axes") {
    DistanceMatrix<double> z(4, std::vector<double>(16, 0.0));
    z.mark_validated();
    auto res = distmat::pcoa(z);
    for (double v : res.eigenvalues) CHECK(std::abs(v) <= 1e-15);
    CHECK(res.axes == 0);
    CHECK(res.coordinates.empty());
    CHECK(res.proportion_explained.empty());
    CHECK_FALSE(res.negative_eigenvalue_warning);
}

TEST_CASE("non-Euclidean input sets the warning and drops negative axes") {
    // Equilateral side-2 triangle plus a point at distance 1 from all three
    // vertices: impossible in any Euclidean space, so the centered matrix
    // has a negative eigenvalue (-0.25).
    DistanceMatrix<double> m(4, {0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0, 1, 1, 1, 1, 0});
    m.mark_validated();
    auto res = distmat::pcoa(m);
    CHECK(res.negative_eigenvalue_warning);
    CHECK(res.eigenvalues.back() == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(res.axes == 2);  // two positive eigenvalues retained
    double positive_sum = res.eigenvalues[0] + res.eigenvalues[1];
    double prop_sum = 0;
    for (double p : res.proportion_explained) prop_sum += p;
    CHECK(prop_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.proportion_explained[0] ==
          doctest::Approx(res.eigenvalues[0] / positive_sum).epsilon(1e-12));
}

TEST_CASE("axes flag caps the retained axes") {
    auto mat = testutil::point_cloud_distances(12, 3, 8);
    distmat::validate(mat);
    PcoaOptions<double> opts;
    opts.axes = 1;
    auto res = distmat::pcoa(mat, opts);
    CHECK(res.axes == 1);
    CHECK(res.coordinates.size() == 12);
    CHECK(res.proportion_explained.size() == 1);
}

TEST_CASE("Euclidean point clouds are reproduced by the coordinates") {
    for (index_t d : {1, 2, 3, 5}) {
        auto mat = testutil::point_cloud_distances(30, d, 40 + static_cast<std::uint64_t>(d));
        distmat::validate(mat);
        auto res = distmat::pcoa(mat);
        for (index_t i = 0; i < 30; ++i)
            for (index_t j = i + 1; j < 30; ++j) {
                double expected = mat(i, j);
                CHECK(std::abs(coordinate_distance(res, i, j) - expected) <= 1e-6 * expected);
            }
    }
}

TEST_CASE("eigenvalue sum matches the trace of the centered matrix") {
    auto mat = testutil::validated_random(40, 12);
    auto res = distmat::pcoa(mat);
    auto centered = distmat::center_fused(mat);
    double sum = 0;
    for (double v : res.eigenvalues) sum += v;
    double trace = centered_trace(centered);
    CHECK(std::abs(sum - trace) <= 1e-8 * std::abs(trace));
}

TEST_CASE("coordinates are orthogonal with squared norms equal to the eigenvalues") {
    auto mat = testutil::point_cloud_distances(25, 3, 99);
    distmat::validate(mat);
    auto res = distmat::pcoa(mat);
    const double scale = res.eigenvalues[0];
    for (index_t a = 0; a < res.axes; ++a)
        for (index_t b = a; b < res.axes; ++b) {
            double dot = 0;
            for (index_t i = 0; i < res.n; ++i)
                dot += res.coordinates[static_cast<std::size_t>(i * res.axes + a)] *
                       res.coordinates[static_cast<std::size_t>(i * res.axes + b)];
            double expected = a == b ? res.eigenvalues[static_cast<std::size_t>(a)] : 0.0;
            CHECK(std::abs(dot - expected) <= 1e-8 * scale);
        }
}

TEST_CASE("eigenvalues come back sorted descending") {
    auto mat = testutil::validated_random(21, 13);
    auto res = distmat::pcoa(mat);
    for (std::size_t i = 1; i < res.eigenvalues.size(); ++i)
        CHECK(res.eigenvalues[i - 1] >= res.eigenvalues[i]);
}

TEST_CASE("a custom eigensolver backend is invoked") {
    auto mat = testutil::validated_random(10, 14);
    int calls = 0;
    PcoaOptions<double> opts;
    opts.solver = [&](std::span<const double> data, index_t n) {
        ++calls;
        return distmat::dense_symmetric_eigen<double>(data, n);
    };
    auto res = distmat::pcoa(mat, opts);
    CHECK(calls == 1);
    auto dflt = distmat::pcoa(mat);
    CHECK(res.eigenvalues == dflt.eigenvalues);
}

TEST_CASE("naive centering option gives the same geometry") {
    auto mat = testutil::point_cloud_distances(15, 2, 3);
    distmat::validate(mat);
    PcoaOptions<double> naive_opts;
    naive_opts.naive_centering = true;
    auto a = distmat::pcoa(mat, naive_opts);
    auto b = distmat::pcoa(mat);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("pcoa rejects tiny and unvalidated inputs") {
    DistanceMatrix<double> one(1, {0.0});
    one.mark_validated();
    CHECK_THROWS_AS(distmat::pcoa(one), distmat::DimensionError);
    DistanceMatrix<double> m(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
    CHECK_THROWS_AS(distmat::pcoa(m), distmat::ValidationRequiredError);
}
