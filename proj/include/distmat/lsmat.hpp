#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distmat/common.hpp"
#include "distmat/distance_matrix.hpp"

namespace distmat {

// Labeled square matrix text ("lsmat"): a header line of TAB + tab-separated
// ids, then one line per row of id TAB values, rows in header order.

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

template <typename T>
T parse_value(std::string_view field, index_t line_no, index_t col) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range)
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                         ": value out of range: '" + std::string(field) + "'");
    if (ec != std::errc{} || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                         ": not a number: '" + std::string(field) + "'");
    return value;
}

}  // namespace detail

// Parses an lsmat stream into an unvalidated DistanceMatrix.
template <typename T>
DistanceMatrix<T> parse_lsmat(std::istream& in) {
    std::string line;
    if (!detail::read_line(in, line)) throw ParseError("empty input: missing lsmat header");
    auto header = detail::split_tabs(line);
    if (header.size() < 2 || !header[0].empty())
        throw ParseError("line 1: lsmat header must be TAB followed by tab-separated ids");
    std::vector<std::string> ids(header.begin() + 1, header.end());
    for (const auto& id : ids)
        if (id.empty()) throw ParseError("line 1: empty id in header");
    const index_t n = static_cast<index_t>(ids.size());

    std::vector<T> data(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (index_t row = 0; row < n; ++row) {
        const index_t line_no = row + 2;
        if (!detail::read_line(in, line))
            throw ParseError("expected " + std::to_string(n) + " rows, got " +
                             std::to_string(row));
        auto fields = detail::split_tabs(line);
        if (static_cast<index_t>(fields.size()) != n + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n) + " values, got " +
                             std::to_string(fields.size() - 1));
        if (fields[0] != ids[static_cast<std::size_t>(row)])
            throw LabelError("line " + std::to_string(line_no) + ": row id '" +
                             std::string(fields[0]) + "' does not match header id '" +
                             ids[static_cast<std::size_t>(row)] + "'");
        for (index_t col = 0; col < n; ++col)
            data[static_cast<std::size_t>(row * n + col)] =
                detail::parse_value<T>(fields[static_cast<std::size_t>(col + 1)], line_no, col + 1);
    }
    while (detail::read_line(in, line)) {
        if (!line.empty())
            throw ParseError("unexpected content after " + std::to_string(n) + " rows");
    }
    return DistanceMatrix<T>(n, std::move(data), std::move(ids));  // LabelError on duplicates
}

// Writes a square matrix as lsmat. digits is the significant-digit count;
// the default 17 round-trips doubles exactly.
template <typename T>
void write_lsmat(std::span<const T> data, index_t n, std::span<const std::string> ids,
                 std::ostream& out, int digits = 17) {
    if (n < 1) throw DimensionError("lsmat requires n >= 1");
    if (static_cast<index_t>(ids.size()) != n)
        throw DimensionError("expected " + std::to_string(n) + " ids, got " +
                             std::to_string(ids.size()));
    if (data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw DimensionError("data length does not match n*n");
    char buf[64];
    for (const auto& id : ids) out << '\t' << id;
    out << '\n';
    for (index_t i = 0; i < n; ++i) {
        out << ids[static_cast<std::size_t>(i)];
        for (index_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.*g", digits,
                          static_cast<double>(data[static_cast<std::size_t>(i * n + j)]));
            out << '\t' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("lsmat write failed");
}

template <typename T>
void write_lsmat(const DistanceMatrix<T>& mat, std::ostream& out, int digits = 17) {
    write_lsmat(mat.data(), mat.n(), std::span<const std::string>(mat.ids()), out, digits);
}

}  // namespace distmat
