// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_COO_HPP_
#define LOPA_MATRIX_COO_HPP_

#include <algorithm>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"

namespace lopa::matrix {


/// Coordinate storage, entries sorted by (row, column) without duplicates.
template <typename ValueType = double, typename IndexType = int32>
class Coo : public EnableLinOp<Coo<ValueType, IndexType>>,
            public MatrixDataIo<ValueType, IndexType> {
    using Base = EnableLinOp<Coo<ValueType, IndexType>>;

public:
    using value_type = ValueType;
    using index_type = IndexType;

    explicit Coo(std::shared_ptr<const Executor> exec, dim2 size = {},
                 size_type nnz = 0)
        : Base(exec, size),
          values_{exec, nnz},
          col_idxs_{exec, nnz},
          row_idxs_{exec, nnz}
    {}

    Coo(std::shared_ptr<const Executor> exec, dim2 size, Array<ValueType> values,
        Array<IndexType> col_idxs, Array<IndexType> row_idxs)
        : Base(exec, size), values_{exec}, col_idxs_{exec}, row_idxs_{exec}
    {
        values_ = std::move(values);
        col_idxs_ = std::move(col_idxs);
        row_idxs_ = std::move(row_idxs);
        validate();
    }

    static std::unique_ptr<Coo> create(std::shared_ptr<const Executor> exec,
                                       dim2 size = {}, size_type nnz = 0)
    {
        return std::make_unique<Coo>(std::move(exec), size, nnz);
    }

    static std::unique_ptr<Coo> create(std::shared_ptr<const Executor> exec,
                                       dim2 size, Array<ValueType> values,
                                       Array<IndexType> col_idxs,
                                       Array<IndexType> row_idxs)
    {
        return std::make_unique<Coo>(std::move(exec), size, std::move(values),
                                     std::move(col_idxs), std::move(row_idxs));
    }

    static std::unique_ptr<Coo> create(std::shared_ptr<const Executor> exec,
                                       const matrix_data<ValueType, IndexType>& data)
    {
        auto result = create(std::move(exec));
        result->read(data);
        return result;
    }

    static const char* type_name() noexcept { return "coo"; }

    size_type get_num_stored_elements() const noexcept { return values_.size(); }

    ValueType* get_values() noexcept { return values_.get_data(); }
    const ValueType* get_const_values() const noexcept
    {
        return values_.get_const_data();
    }
    IndexType* get_col_idxs() noexcept { return col_idxs_.get_data(); }
    const IndexType* get_const_col_idxs() const noexcept
    {
        return col_idxs_.get_const_data();
    }
    IndexType* get_row_idxs() noexcept { return row_idxs_.get_data(); }
    const IndexType* get_const_row_idxs() const noexcept
    {
        return row_idxs_.get_const_data();
    }

    void validate() const
    {
        const auto nnz = values_.size();
        if (col_idxs_.size() != nnz || row_idxs_.size() != nnz) {
            throw DimensionMismatch("inconsistent COO arrays");
        }
        for (size_type k = 0; k < nnz; ++k) {
            const auto r = row_idxs_[k];
            const auto c = col_idxs_[k];
            if (r < 0 || c < 0 || static_cast<size_type>(r) >= this->get_size().rows ||
                static_cast<size_type>(c) >= this->get_size().cols) {
                throw DimensionMismatch("COO entry " + std::to_string(k) +
                                        " out of range");
            }
            if (k > 0 && std::tie(row_idxs_[k - 1], col_idxs_[k - 1]) >= std::tie(r, c)) {
                throw DimensionMismatch("COO entries not sorted at " +
                                        std::to_string(k));
            }
        }
    }

    void read(const matrix_data<ValueType, IndexType>& input) override
    {
        auto data = input;
        data.validate();
        data.canonicalize();
        const auto nnz = data.nonzeros.size();
        this->set_size(data.size);
        values_.resize_and_reset(nnz);
        col_idxs_.resize_and_reset(nnz);
        row_idxs_.resize_and_reset(nnz);
        for (size_type k = 0; k < nnz; ++k) {
            values_[k] = data.nonzeros[k].value;
            col_idxs_[k] = data.nonzeros[k].column;
            row_idxs_[k] = data.nonzeros[k].row;
        }
    }

    void write(matrix_data<ValueType, IndexType>& data) const override
    {
        data = matrix_data<ValueType, IndexType>{this->get_size()};
        for (size_type k = 0; k < values_.size(); ++k) {
            data.nonzeros.push_back({row_idxs_[k], col_idxs_[k], values_[k]});
        }
    }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        spmv(nullptr, b, nullptr, x);
    }

    void apply_impl(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                    LinOp* x) const override
    {
        spmv(alpha, b, beta, x);
    }

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        values_.set_executor(exec);
        col_idxs_.set_executor(exec);
        row_idxs_.set_executor(exec);
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    using Vec = Dense<ValueType>;

    // x = beta x (or 0), then x[row] += alpha * (value * b[col]) in entry
    // order. The parallel variant splits the entries into equal segments;
    // rows spanning a segment boundary are skipped by the workers and
    // accumulated sequentially afterwards, so each row sees the same
    // operation order as the sequential kernel.
    void spmv(const LinOp* alpha, const LinOp* b, const LinOp* beta, LinOp* x) const
    {
        auto db = as<const Vec>(b);
        auto dx = as<Vec>(x);
        const auto rows = this->get_size().rows;
        const size_type m = db->get_size().cols;
        const size_type nnz = values_.size();
        const auto vals = values_.get_const_data();
        const auto cidx = col_idxs_.get_const_data();
        const auto ridx = row_idxs_.get_const_data();
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        auto xv = dx->get_values();
        const auto xs = dx->get_stride();
        const ValueType* av = alpha ? as<const Vec>(alpha)->get_const_values() : nullptr;
        const ValueType* btv = beta ? as<const Vec>(beta)->get_const_values() : nullptr;
        const size_type ainc = alpha && alpha->get_size().cols > 1 ? 1 : 0;
        const size_type binc = beta && beta->get_size().cols > 1 ? 1 : 0;

        auto init_rows = [&](size_type bg, size_type e) {
            for (size_type i = bg; i < e; ++i) {
                for (size_type j = 0; j < m; ++j) {
                    auto& xi = xv[i * xs + j];
                    if (btv == nullptr) {
                        xi = ValueType{};
                    } else {
                        const auto bt = btv[j * binc];
                        xi = bt == ValueType{} ? ValueType{} : bt * xi;
                    }
                }
            }
        };
        auto accumulate = [&](size_type k) {
            const auto i = static_cast<size_type>(ridx[k]);
            const auto c = static_cast<size_type>(cidx[k]);
            for (size_type j = 0; j < m; ++j) {
                const auto prod = vals[k] * bv[c * bs + j];
                xv[i * xs + j] += av == nullptr ? prod : av[j * ainc] * prod;
            }
        };

        const Traffic traffic{
            m * (kernel::bytes<ValueType>(2 * nnz + (alpha ? 3 * rows : 0)) +
                 kernel::bytes<IndexType>(2 * nnz)),
            m * kernel::bytes<ValueType>(rows)};
        auto op = kernel::make_operation(
            alpha ? "coo::advanced_spmv" : "coo::spmv", traffic,
            [&](const ReferenceExecutor&) {
                init_rows(0, rows);
                for (size_type k = 0; k < nnz; ++k) {
                    accumulate(k);
                }
            },
            [&](const ParallelExecutor& par) {
                par.parallel_for(rows, init_rows);
                const size_type segments = par.num_blocks(nnz);
                if (segments <= 1) {
                    for (size_type k = 0; k < nnz; ++k) {
                        accumulate(k);
                    }
                    return;
                }
                std::vector<IndexType> shared;
                for (size_type s = 1; s < segments; ++s) {
                    const auto start = par.block_range(nnz, s).first;
                    if (ridx[start] == ridx[start - 1] &&
                        (shared.empty() || shared.back() != ridx[start])) {
                        shared.push_back(ridx[start]);
                    }
                }
                auto is_shared = [&](IndexType r) {
                    return std::binary_search(shared.begin(), shared.end(), r);
                };
                par.for_each_block(nnz, [&](size_type, size_type bg, size_type e) {
                    for (size_type k = bg; k < e; ++k) {
                        if (!is_shared(ridx[k])) {
                            accumulate(k);
                        }
                    }
                });
                for (const auto r : shared) {
                    auto k = static_cast<size_type>(
                        std::lower_bound(ridx, ridx + nnz, r) - ridx);
                    for (; k < nnz && ridx[k] == r; ++k) {
                        accumulate(k);
                    }
                }
            });
        this->get_executor()->run(op);
    }

    Array<ValueType> values_;
    Array<IndexType> col_idxs_;
    Array<IndexType> row_idxs_;
};


}  // namespace lopa::matrix

#endif  // LOPA_MATRIX_COO_HPP_
