#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <new>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "distmat/centering.hpp"
#include "distmat/common.hpp"
#include "distmat/distance_matrix.hpp"
#include "distmat/mantel.hpp"
#include "distmat/parallel.hpp"
#include "distmat/permutation.hpp"
#include "distmat/rng.hpp"

namespace distmat {

enum class Workload { center, mantel, validate };
enum class Variant { naive, optimized };

inline const char* to_string(Workload w) {
    switch (w) {
        case Workload::center: return "center";
        case Workload::mantel: return "mantel";
        case Workload::validate: return "validate";
    }
    return "?";
}

inline const char* to_string(Variant v) {
    return v == Variant::naive ? "naive" : "optimized";
}

struct BenchCase {
    Workload workload = Workload::center;
    index_t n = 256;
    int threads = 1;
    Variant variant = Variant::naive;
    int repetitions = 3;
    index_t tile = kDefaultTile;
    std::uint64_t seed = 0;
    index_t permutations = 99;  // mantel workload only
};

// Timings over the repetitions plus a scalar digest of the numeric output.
// The digest keeps the kernel from being optimized away and lets naive and
// optimized runs of the same (workload, n, seed) be cross-checked.
struct BenchReport {
    BenchCase bench_case;
    double min_s = 0;
    double median_s = 0;
    double max_s = 0;
    double checksum = 0;
};

// Absolute-ish tolerance for naive vs optimized checksum agreement:
// |a - b| <= tol * (1 + max(|a|, |b|)). Validation flags must match exactly;
// mantel sums up to k per-statistic differences of at most 1e-10 each.
inline double checksum_tolerance(Workload w) {
    switch (w) {
        case Workload::center: return 1e-9;
        case Workload::mantel: return 1e-6;
        case Workload::validate: return 0.0;
    }
    return 0.0;
}

inline bool checksums_agree(Workload w, double a, double b) {
    return std::abs(a - b) <= checksum_tolerance(w) * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Synthetic validated matrix: distances |u[i] - u[j]| from per-seed uniform
// draws. Symmetric and hollow by construction, and the condensed vector is
// non-constant for n >= 3 (almost surely), so every workload accepts it.
template <typename T>
DistanceMatrix<T> synth_distance_matrix(index_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    // n*n buffer first so an impossible size fails before any other work
    std::vector<T> data(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    auto eng = make_engine(seed, RngDomain::synthesis, stream);
    std::vector<T> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = static_cast<T>(uniform_real(eng));
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            data[static_cast<std::size_t>(i * n + j)] =
                std::abs(u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)]);
    DistanceMatrix<T> mat(n, std::move(data));
    mat.mark_validated();
    return mat;
}

namespace detail {

template <typename T>
double sum_of_squares(std::span<const T> v) {
    double acc = 0;
    for (T x : v) acc += static_cast<double>(x) * static_cast<double>(x);
    return acc;
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

// Synthesizes the input from the case seed, times the selected kernel
// variant (input synthesis, permutation tables, and the checksum stay
// outside the timed region), and digests the last repetition's output.
template <typename T>
BenchReport run_bench(const BenchCase& c) {
    if (c.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (c.n < 2) throw std::invalid_argument("bench requires n >= 2");
    if (c.workload == Workload::mantel && c.n < 3)
        throw std::invalid_argument("mantel bench requires n >= 3");

    BenchReport report;
    report.bench_case = c;
    std::vector<double> secs(static_cast<std::size_t>(c.repetitions));
    using clock = std::chrono::steady_clock;

    try {
        switch (c.workload) {
            case Workload::center: {
                auto mat = synth_distance_matrix<T>(c.n, c.seed);
                CenteredMatrix<T> out;
                for (int r = 0; r < c.repetitions; ++r) {
                    auto t0 = clock::now();
                    out = c.variant == Variant::naive
                              ? center_naive(mat)
                              : center_fused(mat, c.tile, c.threads);
                    secs[static_cast<std::size_t>(r)] =
                        std::chrono::duration<double>(clock::now() - t0).count();
                }
                report.checksum = detail::sum_of_squares(std::span<const T>(out.data));
                break;
            }
            case Workload::mantel: {
                auto x = synth_distance_matrix<T>(c.n, c.seed, 0);
                auto y = synth_distance_matrix<T>(c.n, c.seed, 1);
                auto perms = make_permutations(c.n, c.permutations, c.seed);
                MantelResult<T> out;
                for (int r = 0; r < c.repetitions; ++r) {
                    auto t0 = clock::now();
                    out = c.variant == Variant::naive
                              ? mantel_naive(x, y, perms)
                              : mantel_fused(x, y, perms, c.tile, c.threads);
                    secs[static_cast<std::size_t>(r)] =
                        std::chrono::duration<double>(clock::now() - t0).count();
                }
                double acc = static_cast<double>(out.orig_stat);
                for (T s : out.permuted_stats) acc += static_cast<double>(s);
                report.checksum = acc;
                break;
            }
            case Workload::validate: {
                auto mat = synth_distance_matrix<T>(c.n, c.seed);
                ValidationReport out;
                for (int r = 0; r < c.repetitions; ++r) {
                    auto t0 = clock::now();
                    out = c.variant == Variant::naive
                              ? validate_naive(mat)
                              : validate_tiled(mat, c.tile, T(0), c.threads);
                    secs[static_cast<std::size_t>(r)] =
                        std::chrono::duration<double>(clock::now() - t0).count();
                }
                report.checksum = (out.is_symmetric ? 2.0 : 0.0) + (out.is_hollow ? 1.0 : 0.0);
                break;
            }
        }
    } catch (const std::bad_alloc&) {
        const double gib = static_cast<double>(c.n) * static_cast<double>(c.n) * sizeof(T) /
                           (1024.0 * 1024.0 * 1024.0);
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "allocation failed for %s n=%lld (about %.2f GiB per matrix buffer)",
                      to_string(c.workload), static_cast<long long>(c.n), gib);
        throw ResourceError(msg);
    } catch (const std::length_error&) {
        throw ResourceError("requested size exceeds addressable memory: n=" +
                            std::to_string(c.n));
    }

    report.min_s = *std::min_element(secs.begin(), secs.end());
    report.max_s = *std::max_element(secs.begin(), secs.end());
    report.median_s = detail::median_of(secs);
    return report;
}

enum class TableFormat { csv, text };

// Rows grouped by workload then n; otherwise input order is kept.
inline std::vector<BenchReport> group_reports(std::vector<BenchReport> reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const BenchReport& a, const BenchReport& b) {
        if (a.bench_case.workload != b.bench_case.workload)
            return static_cast<int>(a.bench_case.workload) < static_cast<int>(b.bench_case.workload);
        return a.bench_case.n < b.bench_case.n;
    });
    return reports;
}

inline void emit_table(std::vector<BenchReport> reports, TableFormat format, std::ostream& out) {
    reports = group_reports(std::move(reports));
    char buf[256];
    if (format == TableFormat::csv) {
        out << "workload,n,threads,variant,tile,reps,min_s,median_s,max_s,checksum\n";
        for (const auto& r : reports) {
            const auto& c = r.bench_case;
            std::snprintf(buf, sizeof(buf), "%s,%lld,%d,%s,%lld,%d,%.6e,%.6e,%.6e,%.17g\n",
                          to_string(c.workload), static_cast<long long>(c.n), c.threads,
                          to_string(c.variant), static_cast<long long>(c.tile), c.repetitions,
                          r.min_s, r.median_s, r.max_s, r.checksum);
            out << buf;
        }
        return;
    }
    // Text layout pairs the naive row with the optimized row for the same
    // (workload, n, threads, seed) and reports the median speedup.
    out << "workload     n        threads  naive_s      optimized_s  speedup\n";
    std::vector<bool> used(reports.size(), false);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (used[i]) continue;
        const auto& a = reports[i];
        const BenchReport* naive = a.bench_case.variant == Variant::naive ? &a : nullptr;
        const BenchReport* opt = a.bench_case.variant == Variant::optimized ? &a : nullptr;
        for (std::size_t j = i + 1; j < reports.size() && (!naive || !opt); ++j) {
            if (used[j]) continue;
            const auto& b = reports[j];
            if (b.bench_case.workload == a.bench_case.workload && b.bench_case.n == a.bench_case.n &&
                b.bench_case.threads == a.bench_case.threads &&
                b.bench_case.seed == a.bench_case.seed &&
                b.bench_case.variant != a.bench_case.variant) {
                (b.bench_case.variant == Variant::naive ? naive : opt) = &b;
                used[j] = true;
            }
        }
        auto fmt_time = [](const BenchReport* r, char* dst, std::size_t len) {
            if (r)
                std::snprintf(dst, len, "%-12.4g", r->median_s);
            else
                std::snprintf(dst, len, "%-12s", "-");
        };
        char tn[24], to[24], sp[24];
        fmt_time(naive, tn, sizeof(tn));
        fmt_time(opt, to, sizeof(to));
        if (naive && opt && opt->median_s > 0)
            std::snprintf(sp, sizeof(sp), "%.2fx", naive->median_s / opt->median_s);
        else
            std::snprintf(sp, sizeof(sp), "-");
        std::snprintf(buf, sizeof(buf), "%-12s %-8lld %-8d %s %s %s\n",
                      to_string(a.bench_case.workload), static_cast<long long>(a.bench_case.n),
                      a.bench_case.threads, tn, to, sp);
        out << buf;
    }
}

// Messages for every naive/optimized checksum pair on the same
// (workload, n, seed) that disagrees beyond the workload tolerance.
inline std::vector<std::string> checksum_mismatches(std::span<const BenchReport> reports) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = i + 1; j < reports.size(); ++j) {
            const auto& a = reports[i];
            const auto& b = reports[j];
            if (a.bench_case.workload != b.bench_case.workload || a.bench_case.n != b.bench_case.n ||
                a.bench_case.seed != b.bench_case.seed ||
                a.bench_case.variant == b.bench_case.variant)
                continue;
            if (!checksums_agree(a.bench_case.workload, a.checksum, b.checksum)) {
                char buf[256];
                std::snprintf(buf, sizeof(buf),
                              "checksum mismatch: %s n=%lld seed=%llu: naive/optimized %.17g vs %.17g",
                              to_string(a.bench_case.workload),
                              static_cast<long long>(a.bench_case.n),
                              static_cast<unsigned long long>(a.bench_case.seed),
                              a.bench_case.variant == Variant::naive ? a.checksum : b.checksum,
                              a.bench_case.variant == Variant::naive ? b.checksum : a.checksum);
                out.emplace_back(buf);
            }
        }
    }
    return out;
}

}  // namespace distmat
