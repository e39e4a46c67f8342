#include "distmat/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "distmat/distmat.hpp"

namespace distmat {
namespace {

struct CommonOpts {
    std::string precision = "f64";
    int threads = 0;
    index_t tile = kDefaultTile;
    bool naive = false;
    bool skip_validation = false;
    std::string output;  // empty: stdout
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_output = true) {
    cmd->add_option("--precision", o.precision, "Element precision")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all available)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--tile", o.tile, "Tile size for the optimized kernels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--naive", o.naive, "Run the naive reference path");
    if (with_output)
        cmd->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

template <typename T>
DistanceMatrix<T> load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return parse_lsmat<T>(in);
}

// Validates (or trusts, with --skip-validation) a freshly parsed matrix.
// Returns false when validation fails; the caller exits with code 1.
template <typename T>
bool ensure_validated(DistanceMatrix<T>& mat, const CommonOpts& o, const std::string& path,
                      std::ostream& err) {
    if (o.skip_validation) {
        mat.mark_validated();
        return true;
    }
    ValidationReport rep = validate(mat, o.tile, T(0), o.threads);
    if (!rep.ok()) {
        err << path << ": validation failed (symmetric: " << (rep.is_symmetric ? "true" : "false")
            << ", hollow: " << (rep.is_hollow ? "true" : "false") << ")";
        if (rep.first_violation)
            err << " at (" << rep.first_violation->first << ", " << rep.first_violation->second
                << ")";
        err << "\n";
        return false;
    }
    return true;
}

class OutputStream {
public:
    explicit OutputStream(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error("cannot open output file: " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
int run_validate(const std::string& input, const CommonOpts& o, double tolerance,
                 std::ostream& out, std::ostream& err) {
    auto mat = load_matrix<T>(input);
    ValidationReport rep = o.naive ? validate_naive(mat, static_cast<T>(tolerance))
                                   : validate_tiled(mat, o.tile, static_cast<T>(tolerance),
                                                    o.threads);
    out << "symmetric: " << (rep.is_symmetric ? "true" : "false")
        << ", hollow: " << (rep.is_hollow ? "true" : "false") << "\n";
    if (rep.first_violation)
        out << "first violation: (" << rep.first_violation->first << ", "
            << rep.first_violation->second << ")\n";
    (void)err;
    return rep.ok() ? 0 : 1;
}

template <typename T>
int run_center(const std::string& input, const CommonOpts& o, std::ostream& out,
               std::ostream& err) {
    auto mat = load_matrix<T>(input);
    if (!ensure_validated(mat, o, input, err)) return 1;
    CenteredMatrix<T> centered =
        o.naive ? center_naive(mat) : center_fused(mat, o.tile, o.threads);
    OutputStream os(o.output, out);
    write_lsmat(std::span<const T>(centered.data), centered.n,
                std::span<const std::string>(mat.ids()), os.get());
    return 0;
}

template <typename T>
int run_pcoa(const std::string& input, const CommonOpts& o, std::optional<index_t> axes,
             std::ostream& out, std::ostream& err) {
    auto mat = load_matrix<T>(input);
    if (!ensure_validated(mat, o, input, err)) return 1;
    PcoaOptions<T> opts;
    opts.axes = axes;
    opts.tile = o.tile;
    opts.threads = o.threads;
    opts.naive_centering = o.naive;
    PcoaResult<T> res = pcoa(mat, opts);
    if (res.negative_eigenvalue_warning)
        err << "warning: negative eigenvalues present (non-Euclidean input); "
               "they are excluded from the coordinates\n";
    OutputStream os(o.output, out);
    for (index_t a = 0; a < res.axes; ++a)
        os.get() << "axis" << (a + 1) << '\t'
                 << fmt_g(static_cast<double>(res.eigenvalues[static_cast<std::size_t>(a)]))
                 << '\t'
                 << fmt_g(static_cast<double>(
                        res.proportion_explained[static_cast<std::size_t>(a)]))
                 << '\n';
    os.get() << '\n';
    for (index_t i = 0; i < res.n; ++i) {
        os.get() << mat.ids()[static_cast<std::size_t>(i)];
        for (index_t a = 0; a < res.axes; ++a)
            os.get() << '\t'
                     << fmt_g(static_cast<double>(
                            res.coordinates[static_cast<std::size_t>(i * res.axes + a)]));
        os.get() << '\n';
    }
    return 0;
}

template <typename T>
int run_mantel(const std::string& in_x, const std::string& in_y, const CommonOpts& o,
               index_t permutations, std::uint64_t seed, const std::string& stats_csv,
               std::ostream& out, std::ostream& err) {
    auto x = load_matrix<T>(in_x);
    auto y = load_matrix<T>(in_y);
    if (!ensure_validated(x, o, in_x, err)) return 1;
    if (!ensure_validated(y, o, in_y, err)) return 1;
    PermutationSet perms = make_permutations(x.n(), permutations, seed, o.threads);
    MantelResult<T> res = o.naive ? mantel_naive(x, y, perms)
                                  : mantel_fused(x, y, perms, o.tile, o.threads);
    OutputStream os(o.output, out);
    os.get() << "orig_stat: " << fmt_g(static_cast<double>(res.orig_stat)) << "\n"
             << "p_value: " << fmt_g(static_cast<double>(res.p_value)) << "\n"
             << "permutations: " << res.permutations << "\n"
             << "threads: " << effective_threads(o.threads) << "\n";
    if (!stats_csv.empty()) {
        std::ofstream csv(stats_csv);
        if (!csv) throw Error("cannot open output file: " + stats_csv);
        csv << "permuted_stat\n";
        for (T s : res.permuted_stats) csv << fmt_g(static_cast<double>(s)) << "\n";
    }
    return 0;
}

struct BenchOpts {
    std::string workload = "center";
    std::vector<index_t> sizes{256, 1024, 4096, 8192};
    std::vector<int> threads_list{1, 0};
    int reps = 3;
    index_t tile = kDefaultTile;
    std::uint64_t seed = 0;
    index_t permutations = 99;
    std::string format = "csv";
    std::string precision = "f64";
    std::string output;
};

template <typename T>
int run_bench_sweep(const BenchOpts& b, std::ostream& out, std::ostream& err) {
    std::vector<Workload> workloads;
    if (b.workload == "all")
        workloads = {Workload::center, Workload::mantel, Workload::validate};
    else if (b.workload == "center")
        workloads = {Workload::center};
    else if (b.workload == "mantel")
        workloads = {Workload::mantel};
    else
        workloads = {Workload::validate};

    std::vector<BenchReport> reports;
    for (Workload w : workloads) {
        for (index_t n : b.sizes) {
            for (int threads : b.threads_list) {
                for (Variant v : {Variant::naive, Variant::optimized}) {
                    BenchCase c;
                    c.workload = w;
                    c.n = n;
                    c.threads = effective_threads(threads);
                    c.variant = v;
                    c.repetitions = b.reps;
                    c.tile = b.tile;
                    c.seed = b.seed;
                    c.permutations = b.permutations;
                    reports.push_back(run_bench<T>(c));
                }
            }
        }
    }
    OutputStream os(b.output, out);
    emit_table(reports, b.format == "text" ? TableFormat::text : TableFormat::csv, os.get());
    auto mismatches = checksum_mismatches(reports);
    for (const auto& m : mismatches) err << m << "\n";
    return mismatches.empty() ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cache-aware distance matrix operations: validation, Gower centering, "
                 "principal coordinates, and the Mantel permutation test"};
    app.name("distmat");
    app.require_subcommand(1);

    CommonOpts vo;
    double tolerance = 0.0;
    std::string v_input;
    auto* v_cmd = app.add_subcommand("validate", "Check that a matrix is symmetric and hollow");
    v_cmd->add_option("input", v_input, "lsmat file")->required();
    add_common(v_cmd, vo, /*with_output=*/false);
    v_cmd->add_option("--tolerance", tolerance, "Absolute comparison tolerance (default exact)")
        ->check(CLI::NonNegativeNumber);

    CommonOpts co;
    std::string c_input;
    auto* c_cmd = app.add_subcommand("center", "Gower double-centering of a distance matrix");
    c_cmd->add_option("input", c_input, "lsmat file")->required();
    add_common(c_cmd, co);
    c_cmd->add_flag("--skip-validation", co.skip_validation,
                    "Trust the input instead of validating it");

    CommonOpts po;
    std::string p_input;
    index_t p_axes = -1;
    auto* p_cmd = app.add_subcommand("pcoa", "Principal coordinates analysis");
    p_cmd->add_option("input", p_input, "lsmat file")->required();
    add_common(p_cmd, po);
    p_cmd->add_option("--axes", p_axes, "Cap on the number of retained axes")
        ->check(CLI::NonNegativeNumber);
    p_cmd->add_flag("--skip-validation", po.skip_validation,
                    "Trust the input instead of validating it");

    CommonOpts mo;
    std::string m_x, m_y, m_stats_csv;
    index_t m_perms = 999;
    std::uint64_t m_seed = 0;
    auto* m_cmd = app.add_subcommand("mantel", "Mantel permutation test between two matrices");
    m_cmd->add_option("x", m_x, "first lsmat file")->required();
    m_cmd->add_option("y", m_y, "second lsmat file")->required();
    add_common(m_cmd, mo);
    m_cmd->add_option("--permutations", m_perms, "Number of Monte-Carlo permutations")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    m_cmd->add_option("--seed", m_seed, "RNG seed")->capture_default_str();
    m_cmd->add_option("--stats-csv", m_stats_csv, "Dump permuted statistics to a CSV file");
    m_cmd->add_flag("--skip-validation", mo.skip_validation,
                    "Trust the inputs instead of validating them");

    BenchOpts bo;
    auto* b_cmd = app.add_subcommand("bench", "Time naive vs optimized kernels");
    b_cmd->add_option("--workload", bo.workload, "Workload to benchmark")
        ->check(CLI::IsMember({"center", "mantel", "validate", "all"}))
        ->capture_default_str();
    b_cmd->add_option("--sizes", bo.sizes, "Matrix sizes")->delimiter(',')->capture_default_str();
    b_cmd->add_option("--threads-list", bo.threads_list, "Thread counts (0 = all available)")
        ->delimiter(',')
        ->capture_default_str();
    b_cmd->add_option("--reps", bo.reps, "Repetitions per case")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    b_cmd->add_option("--tile", bo.tile, "Tile size")->check(CLI::PositiveNumber)
        ->capture_default_str();
    b_cmd->add_option("--seed", bo.seed, "Input synthesis seed")->capture_default_str();
    b_cmd->add_option("--permutations", bo.permutations, "Permutations for the mantel workload")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    b_cmd->add_option("--format", bo.format, "Report format")
        ->check(CLI::IsMember({"csv", "text"}))
        ->capture_default_str();
    b_cmd->add_option("--precision", bo.precision, "Element precision")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    b_cmd->add_option("-o,--output", bo.output, "Output file (default: stdout)");

    std::vector<const char*> argv;
    argv.push_back("distmat");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());

        auto dispatch = [&](const std::string& precision, auto&& fn) {
            return precision == "f32" ? fn(float{}) : fn(double{});
        };
        if (*v_cmd)
            return dispatch(vo.precision, [&](auto t) {
                return run_validate<decltype(t)>(v_input, vo, tolerance, out, err);
            });
        if (*c_cmd)
            return dispatch(co.precision, [&](auto t) {
                return run_center<decltype(t)>(c_input, co, out, err);
            });
        if (*p_cmd)
            return dispatch(po.precision, [&](auto t) {
                std::optional<index_t> axes;
                if (p_axes >= 0) axes = p_axes;
                return run_pcoa<decltype(t)>(p_input, po, axes, out, err);
            });
        if (*m_cmd)
            return dispatch(mo.precision, [&](auto t) {
                return run_mantel<decltype(t)>(m_x, m_y, mo, m_perms, m_seed, m_stats_csv, out,
                                               err);
            });
        if (*b_cmd)
            return dispatch(bo.precision, [&](auto t) {
                return run_bench_sweep<decltype(t)>(bo, out, err);
            });
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {  // parse/label/dimension/validation-required
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
        return 1;
    }
}

}  // namespace distmat
