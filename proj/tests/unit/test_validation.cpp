#include <vector>

#include "doctest.h"

#include "distmat/distance_matrix.hpp"
#include "test_util.hpp"

using distmat::DistanceMatrix;
using distmat::index_t;
using distmat::ValidationReport;

TEST_CASE("validate_naive flags the three basic shapes") {
    DistanceMatrix<double> good(2, {0, 1, 1, 0});
    auto rep = distmat::validate_naive(good);
    CHECK(rep.is_symmetric);
    CHECK(rep.is_hollow);
    CHECK_FALSE(rep.first_violation.has_value());

    DistanceMatrix<double> asym(2, {0, 1, 2, 0});
    rep = distmat::validate_naive(asym);
    CHECK_FALSE(rep.is_symmetric);
    CHECK(rep.is_hollow);
    REQUIRE(rep.first_violation.has_value());
    CHECK(rep.first_violation->first == 0);
    CHECK(rep.first_violation->second == 1);

    DistanceMatrix<double> diag(2, {1, 2, 2, 3});
    rep = distmat::validate_naive(diag);
    CHECK(rep.is_symmetric);
    CHECK_FALSE(rep.is_hollow);
    REQUIRE(rep.first_violation.has_value());
    CHECK(rep.first_violation->first == rep.first_violation->second);
}

TEST_CASE("validate_naive rejects non-square buffers") {
    std::vector<double> buf(6, 0.0);
    CHECK_THROWS_AS(distmat::validate_naive(std::span<const double>(buf), 2, 3),
                    distmat::DimensionError);
}

TEST_CASE("validate_tiled catches a single perturbed element in a 257x257 matrix") {
    auto mat = testutil::random_symmetric_hollow(257, 99);
    std::vector<double> data(mat.data().begin(), mat.data().end());
    data[200 * 257 + 13] += 1.0;
    DistanceMatrix<double> bad(257, std::move(data));
    auto naive = distmat::validate_naive(bad);
    for (index_t tile : {1, 16, 17, 64}) {
        auto tiled = distmat::validate_tiled(bad, tile);
        CHECK_FALSE(tiled.is_symmetric);
        CHECK(tiled.is_symmetric == naive.is_symmetric);
        CHECK(tiled.is_hollow == naive.is_hollow);
    }
}

TEST_CASE("zero matrices validate clean at any size") {
    for (index_t n : {1, 2, 7, 16, 33}) {
        DistanceMatrix<double> z(n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
        auto rep = distmat::validate_tiled(z);
        CHECK(rep.is_symmetric);
        CHECK(rep.is_hollow);
    }
}

TEST_CASE("random symmetric hollow 100x100 validates clean") {
    auto mat = testutil::random_symmetric_hollow(100, 7);
    auto naive = distmat::validate_naive(mat);
    auto tiled = distmat::validate_tiled(mat);
    CHECK(naive.ok());
    CHECK(tiled.ok());
}

TEST_CASE("tiled equals naive over tile sizes, violations, and thread counts") {
    std::mt19937_64 eng(123);
    for (int iter = 0; iter < 40; ++iter) {
        index_t n = 1 + static_cast<index_t>(eng() % 97);
        auto mat = testutil::random_symmetric_hollow(n, eng());
        std::vector<double> data(mat.data().begin(), mat.data().end());
        switch (iter % 3) {
            case 0: break;  // keep valid
            case 1: {       // one symmetry violation
                if (n > 1) {
                    index_t i = static_cast<index_t>(eng() % static_cast<std::uint64_t>(n));
                    index_t j = static_cast<index_t>(eng() % static_cast<std::uint64_t>(n));
                    if (i == j) j = (j + 1) % n;
                    data[static_cast<std::size_t>(i * n + j)] += 0.5;
                }
                break;
            }
            case 2: {  // one nonzero diagonal entry
                index_t i = static_cast<index_t>(eng() % static_cast<std::uint64_t>(n));
                data[static_cast<std::size_t>(i * n + i)] = 0.25;
                break;
            }
        }
        DistanceMatrix<double> m(n, std::move(data));
        auto naive = distmat::validate_naive(m);
        for (index_t tile : {1, 3, 16, 17, 64}) {
            for (int threads : {1, 2}) {
                auto tiled = distmat::validate_tiled(m, tile, 0.0, threads);
                CHECK(tiled.is_symmetric == naive.is_symmetric);
                CHECK(tiled.is_hollow == naive.is_hollow);
                CHECK(tiled.first_violation.has_value() == !tiled.ok());
            }
        }
    }
}

TEST_CASE("absolute tolerance widens both checks") {
    DistanceMatrix<double> m(2, {0.05, 1.0, 1.04, 0.0});
    auto exact = distmat::validate_naive(m);
    CHECK_FALSE(exact.is_symmetric);
    CHECK_FALSE(exact.is_hollow);
    auto loose = distmat::validate_naive(m, 0.1);
    CHECK(loose.is_symmetric);
    CHECK(loose.is_hollow);
    auto loose_tiled = distmat::validate_tiled(m, 16, 0.1);
    CHECK(loose_tiled.is_symmetric);
    CHECK(loose_tiled.is_hollow);
}

TEST_CASE("validated flag: set by a passing scan, carried by copies, off by default") {
    auto mat = testutil::random_symmetric_hollow(10, 5);
    CHECK_FALSE(mat.is_validated());
    auto rep = distmat::validate(mat);
    CHECK(rep.ok());
    CHECK(mat.is_validated());

    DistanceMatrix<double> copy = mat;  // copies carry the flag, no re-scan
    CHECK(copy.is_validated());

    // any operation producing a new buffer starts unvalidated
    DistanceMatrix<double> rebuilt(mat.n(), {mat.data().begin(), mat.data().end()});
    CHECK_FALSE(rebuilt.is_validated());
}

TEST_CASE("a failing scan leaves the flag unset") {
    DistanceMatrix<double> bad(2, {0, 1, 2, 0});
    auto rep = distmat::validate(bad);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(bad.is_validated());
}

TEST_CASE("DistanceMatrix construction checks") {
    CHECK_THROWS_AS(DistanceMatrix<double>(2, {0, 1, 1}), distmat::DimensionError);
    CHECK_THROWS_AS(DistanceMatrix<double>(2, {0, 1, 1, 0}, {"a", "a"}), distmat::LabelError);
    CHECK_THROWS_AS(DistanceMatrix<double>(2, {0, 1, 1, 0}, {"a"}), distmat::LabelError);
    CHECK_THROWS_AS(DistanceMatrix<double>(0, {}), distmat::DimensionError);
}
