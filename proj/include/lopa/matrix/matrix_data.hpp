// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_MATRIX_DATA_HPP_
#define LOPA_MATRIX_MATRIX_DATA_HPP_

#include <algorithm>
#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/types.hpp"

namespace lopa {


/// Host-side list of (row, column, value) triples; the interchange form
/// between formats and files.
template <typename ValueType = double, typename IndexType = int32>
struct matrix_data {
    using value_type = ValueType;
    using index_type = IndexType;

    struct nonzero_type {
        IndexType row;
        IndexType column;
        ValueType value;

        friend bool operator==(const nonzero_type&, const nonzero_type&) = default;
    };

    dim2 size;
    std::vector<nonzero_type> nonzeros;

    matrix_data() = default;
    explicit matrix_data(dim2 s) : size{s} {}
    matrix_data(dim2 s, std::vector<nonzero_type> nz)
        : size{s}, nonzeros{std::move(nz)}
    {}

    /// Dense row-major initializer; zeros are skipped.
    matrix_data(std::initializer_list<std::initializer_list<ValueType>> rows)
    {
        size.rows = rows.size();
        size.cols = rows.size() > 0 ? rows.begin()->size() : 0;
        IndexType r = 0;
        for (const auto& row : rows) {
            if (row.size() != size.cols) {
                throw DimensionMismatch("ragged dense initializer");
            }
            IndexType c = 0;
            for (const auto& v : row) {
                if (v != ValueType{}) {
                    nonzeros.push_back({r, c, v});
                }
                ++c;
            }
            ++r;
        }
    }

    size_type num_stored() const noexcept { return nonzeros.size(); }

    /// Sorts by (row, column) and sums duplicate coordinates.
    void canonicalize()
    {
        std::stable_sort(nonzeros.begin(), nonzeros.end(), less);
        std::vector<nonzero_type> merged;
        merged.reserve(nonzeros.size());
        for (const auto& nz : nonzeros) {
            if (!merged.empty() && merged.back().row == nz.row &&
                merged.back().column == nz.column) {
                merged.back().value += nz.value;
            } else {
                merged.push_back(nz);
            }
        }
        nonzeros = std::move(merged);
    }

    bool is_canonical() const
    {
        for (size_type i = 1; i < nonzeros.size(); ++i) {
            if (!less(nonzeros[i - 1], nonzeros[i])) {
                return false;
            }
        }
        return true;
    }

    void remove_zeros()
    {
        nonzeros.erase(std::remove_if(nonzeros.begin(), nonzeros.end(),
                                      [](const nonzero_type& nz) {
                                          return nz.value == ValueType{};
                                      }),
                       nonzeros.end());
    }

    /// Throws DimensionMismatch if an index lies outside `size`.
    void validate() const
    {
        for (const auto& nz : nonzeros) {
            if (nz.row < 0 || nz.column < 0 ||
                static_cast<size_type>(nz.row) >= size.rows ||
                static_cast<size_type>(nz.column) >= size.cols) {
                throw DimensionMismatch(
                    "entry (" + std::to_string(nz.row) + ", " +
                    std::to_string(nz.column) + ") outside a " +
                    std::to_string(size.rows) + "x" + std::to_string(size.cols) +
                    " matrix");
            }
        }
    }

    friend bool operator==(const matrix_data&, const matrix_data&) = default;

private:
    static bool less(const nonzero_type& a, const nonzero_type& b) noexcept
    {
        return std::tie(a.row, a.column) < std::tie(b.row, b.column);
    }
};


/// Readable from and writable to matrix_data.
template <typename ValueType, typename IndexType>
class MatrixDataIo {
public:
    virtual ~MatrixDataIo() = default;
    virtual void read(const matrix_data<ValueType, IndexType>& data) = 0;
    virtual void write(matrix_data<ValueType, IndexType>& data) const = 0;

    matrix_data<ValueType, IndexType> to_matrix_data() const
    {
        matrix_data<ValueType, IndexType> data;
        write(data);
        return data;
    }
};


}  // namespace lopa

#endif  // LOPA_MATRIX_MATRIX_DATA_HPP_
