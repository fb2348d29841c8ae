// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_BENCH_POISSON_HPP_
#define LOPA_BENCH_POISSON_HPP_

#include <string>

#include "lopa/core/exception.hpp"
#include "lopa/matrix/matrix_data.hpp"

namespace lopa::bench {


/// 5-point finite-difference Laplacian on the unit square with `grid`
/// cells per side and Dirichlet boundary: (grid - 1)^2 unknowns, 4 on the
/// diagonal and -1 for each interior neighbour.
template <typename ValueType = double>
matrix_data<ValueType, int32> poisson_2d(size_type grid)
{
    if (grid < 2) {
        throw BadParameter("poisson grid must have at least 2 cells per side");
    }
    const size_type m = grid - 1;
    matrix_data<ValueType, int32> data{dim2{m * m}};
    auto id = [m](size_type i, size_type j) { return static_cast<int32>(i * m + j); };
    for (size_type i = 0; i < m; ++i) {
        for (size_type j = 0; j < m; ++j) {
            const auto row = id(i, j);
            if (i > 0) {
                data.nonzeros.push_back({row, id(i - 1, j), ValueType{-1}});
            }
            if (j > 0) {
                data.nonzeros.push_back({row, id(i, j - 1), ValueType{-1}});
            }
            data.nonzeros.push_back({row, row, ValueType{4}});
            if (j + 1 < m) {
                data.nonzeros.push_back({row, id(i, j + 1), ValueType{-1}});
            }
            if (i + 1 < m) {
                data.nonzeros.push_back({row, id(i + 1, j), ValueType{-1}});
            }
        }
    }
    return data;
}


/// Grid size of a "poisson:N" pseudo-path, or 0 if `path` is not one.
inline size_type parse_poisson_path(const std::string& path)
{
    const std::string prefix = "poisson:";
    if (path.rfind(prefix, 0) != 0) {
        return 0;
    }
    std::size_t pos = 0;
    unsigned long grid = 0;
    try {
        grid = std::stoul(path.substr(prefix.size()), &pos);
    } catch (const std::exception&) {
        throw BadParameter("bad poisson grid in '" + path + "'");
    }
    if (pos + prefix.size() != path.size() || grid < 2) {
        throw BadParameter("bad poisson grid in '" + path + "'");
    }
    return grid;
}


}  // namespace lopa::bench

#endif  // LOPA_BENCH_POISSON_HPP_
