// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_IO_MATRIX_MARKET_HPP_
#define LOPA_IO_MATRIX_MARKET_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"

namespace lopa::io {

namespace detail {


inline std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> tokens;
    size_type i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

inline std::string lower(std::string_view s)
{
    std::string out{s};
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool blank(std::string_view line)
{
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

inline size_type parse_count(std::string_view token, size_type line)
{
    size_type value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("expected a non-negative integer, got '" +
                             std::string{token} + "'",
                         line);
    }
    return value;
}

template <typename ValueType>
ValueType parse_value(std::string_view token, size_type line)
{
    const std::string s{token};
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ParseError("expected a real value, got '" + s + "'", line);
    }
    return static_cast<ValueType>(v);
}

/// Shortest representation that reads back to the same value.
template <typename ValueType>
void put_value(std::ostream& os, ValueType v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, ptr - buf);
}


struct header {
    bool coordinate = true;
    bool symmetric = false;
};

inline header parse_header(const std::string& line)
{
    const auto tokens = split(line);
    if (tokens.size() != 5 || lower(tokens[0]) != "%%matrixmarket" ||
        lower(tokens[1]) != "matrix") {
        throw ParseError("missing '%%MatrixMarket matrix' header", 1);
    }
    header h;
    const auto layout = lower(tokens[2]);
    if (layout == "coordinate") {
        h.coordinate = true;
    } else if (layout == "array") {
        h.coordinate = false;
    } else {
        throw ParseError("unknown storage layout '" + std::string{tokens[2]} + "'", 1);
    }
    const auto field = lower(tokens[3]);
    if (field == "complex" || field == "pattern" || field == "integer") {
        throw NotSupported("Matrix Market field '" + field + "'");
    }
    if (field != "real" && field != "double") {
        throw ParseError("unknown field '" + std::string{tokens[3]} + "'", 1);
    }
    const auto symmetry = lower(tokens[4]);
    if (symmetry == "skew-symmetric" || symmetry == "hermitian") {
        throw NotSupported("Matrix Market symmetry '" + symmetry + "'");
    }
    if (symmetry == "general") {
        h.symmetric = false;
    } else if (symmetry == "symmetric") {
        h.symmetric = true;
    } else {
        throw ParseError("unknown symmetry '" + std::string{tokens[4]} + "'", 1);
    }
    return h;
}


}  // namespace detail


/// Parses a real general or symmetric Matrix Market stream. Indices become
/// 0-based, symmetric files are expanded and duplicates are left in place
/// (formats sum them when reading).
template <typename ValueType = double, typename IndexType = int32>
matrix_data<ValueType, IndexType> read_matrix_market(std::istream& is)
{
    std::string line;
    size_type line_no = 0;
    if (!std::getline(is, line)) {
        throw ParseError("empty input", 1);
    }
    ++line_no;
    const auto h = detail::parse_header(line);

    auto next_data_line = [&](std::vector<std::string_view>& tokens) {
        while (std::getline(is, line)) {
            ++line_no;
            if (line.empty() || line[0] == '%' || detail::blank(line)) {
                continue;
            }
            tokens = detail::split(line);
            return true;
        }
        return false;
    };

    std::vector<std::string_view> tokens;
    if (!next_data_line(tokens)) {
        throw ParseError("missing size line", line_no + 1);
    }
    if (tokens.size() != (h.coordinate ? 3u : 2u)) {
        throw ParseError("malformed size line", line_no);
    }
    const auto rows = detail::parse_count(tokens[0], line_no);
    const auto cols = detail::parse_count(tokens[1], line_no);
    if (h.symmetric && rows != cols) {
        throw ParseError("symmetric matrix must be square", line_no);
    }
    matrix_data<ValueType, IndexType> data{dim2{rows, cols}};

    auto push = [&](size_type i, size_type j, ValueType v) {
        data.nonzeros.push_back(
            {static_cast<IndexType>(i), static_cast<IndexType>(j), v});
        if (h.symmetric && i != j) {
            data.nonzeros.push_back(
                {static_cast<IndexType>(j), static_cast<IndexType>(i), v});
        }
    };

    if (h.coordinate) {
        const auto nnz = detail::parse_count(tokens[2], line_no);
        for (size_type k = 0; k < nnz; ++k) {
            if (!next_data_line(tokens)) {
                throw ParseError("expected " + std::to_string(nnz) +
                                     " entries, found " + std::to_string(k),
                                 line_no + 1);
            }
            if (tokens.size() != 3) {
                throw ParseError("malformed entry", line_no);
            }
            const auto i = detail::parse_count(tokens[0], line_no);
            const auto j = detail::parse_count(tokens[1], line_no);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw ParseError("entry index out of range", line_no);
            }
            push(i - 1, j - 1, detail::parse_value<ValueType>(tokens[2], line_no));
        }
    } else {
        for (size_type j = 0; j < cols; ++j) {
            for (size_type i = h.symmetric ? j : 0; i < rows; ++i) {
                if (!next_data_line(tokens)) {
                    throw ParseError("array data ends early", line_no + 1);
                }
                if (tokens.size() != 1) {
                    throw ParseError("malformed array entry", line_no);
                }
                push(i, j, detail::parse_value<ValueType>(tokens[0], line_no));
            }
        }
    }
    if (next_data_line(tokens)) {
        throw ParseError("unexpected trailing data", line_no);
    }
    return data;
}


/// Coordinate general output with 1-based, sorted entries.
template <typename ValueType, typename IndexType>
void write_matrix_market(std::ostream& os,
                         const matrix_data<ValueType, IndexType>& input)
{
    auto data = input;
    data.canonicalize();
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << data.size.rows << ' ' << data.size.cols << ' ' << data.nonzeros.size()
       << '\n';
    for (const auto& nz : data.nonzeros) {
        os << nz.row + 1 << ' ' << nz.column + 1 << ' ';
        detail::put_value(os, nz.value);
        os << '\n';
    }
}


/// Array general output, column-major.
template <typename ValueType>
void write_matrix_market_array(std::ostream& os, const matrix::Dense<ValueType>& m)
{
    os << "%%MatrixMarket matrix array real general\n";
    os << m.get_size().rows << ' ' << m.get_size().cols << '\n';
    for (size_type j = 0; j < m.get_size().cols; ++j) {
        for (size_type i = 0; i < m.get_size().rows; ++i) {
            detail::put_value(os, m.at(i, j));
            os << '\n';
        }
    }
}


/// Builds `MatrixType` on `exec` from a Matrix Market stream.
template <typename MatrixType>
std::unique_ptr<MatrixType> read(std::istream& is, std::shared_ptr<const Executor> exec)
{
    using V = typename MatrixType::value_type;
    if constexpr (std::is_same_v<MatrixType, matrix::Dense<V>>) {
        auto result = MatrixType::create(std::move(exec));
        result->read(read_matrix_market<V, int32>(is));
        return result;
    } else {
        using I = typename MatrixType::index_type;
        return MatrixType::create(std::move(exec), read_matrix_market<V, I>(is));
    }
}


/// Dense operators are written in array layout, sparse ones as coordinates.
template <typename ValueType = double>
void write(std::ostream& os, const LinOp* op)
{
    if (auto dense = dynamic_cast<const matrix::Dense<ValueType>*>(op)) {
        write_matrix_market_array(os, *dense);
        return;
    }
    auto io = dynamic_cast<const MatrixDataIo<ValueType, int32>*>(op);
    if (io == nullptr) {
        throw NotSupported("writing this operator type");
    }
    write_matrix_market(os, io->to_matrix_data());
}


}  // namespace lopa::io

#endif  // LOPA_IO_MATRIX_MARKET_HPP_
