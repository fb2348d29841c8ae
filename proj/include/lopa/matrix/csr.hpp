// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_CSR_HPP_
#define LOPA_MATRIX_CSR_HPP_

#include <memory>
#include <string>
#include <utility>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"

namespace lopa::matrix {


/// Compressed sparse row storage with sorted column indices per row.
template <typename ValueType = double, typename IndexType = int32>
class Csr : public EnableLinOp<Csr<ValueType, IndexType>>,
            public MatrixDataIo<ValueType, IndexType> {
    using Base = EnableLinOp<Csr<ValueType, IndexType>>;

public:
    using value_type = ValueType;
    using index_type = IndexType;

    explicit Csr(std::shared_ptr<const Executor> exec, dim2 size = {},
                 size_type nnz = 0)
        : Base(exec, size),
          values_{exec, nnz},
          col_idxs_{exec, nnz},
          row_ptrs_{exec, size.rows + 1}
    {
        row_ptrs_.fill(0);
    }

    Csr(std::shared_ptr<const Executor> exec, dim2 size, Array<ValueType> values,
        Array<IndexType> col_idxs, Array<IndexType> row_ptrs)
        : Base(exec, size), values_{exec}, col_idxs_{exec}, row_ptrs_{exec}
    {
        values_ = std::move(values);
        col_idxs_ = std::move(col_idxs);
        row_ptrs_ = std::move(row_ptrs);
        validate();
    }

    static std::unique_ptr<Csr> create(std::shared_ptr<const Executor> exec,
                                       dim2 size = {}, size_type nnz = 0)
    {
        return std::make_unique<Csr>(std::move(exec), size, nnz);
    }

    static std::unique_ptr<Csr> create(std::shared_ptr<const Executor> exec,
                                       dim2 size, Array<ValueType> values,
                                       Array<IndexType> col_idxs,
                                       Array<IndexType> row_ptrs)
    {
        return std::make_unique<Csr>(std::move(exec), size, std::move(values),
                                     std::move(col_idxs), std::move(row_ptrs));
    }

    static std::unique_ptr<Csr> create(std::shared_ptr<const Executor> exec,
                                       const matrix_data<ValueType, IndexType>& data)
    {
        auto result = create(std::move(exec));
        result->read(data);
        return result;
    }

    static const char* type_name() noexcept { return "csr"; }

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
    IndexType* get_row_ptrs() noexcept { return row_ptrs_.get_data(); }
    const IndexType* get_const_row_ptrs() const noexcept
    {
        return row_ptrs_.get_const_data();
    }

    /// Throws DimensionMismatch unless the structural invariants hold.
    void validate() const
    {
        const auto rows = this->get_size().rows;
        const auto cols = this->get_size().cols;
        if (row_ptrs_.size() != rows + 1) {
            throw DimensionMismatch("row_ptrs length " +
                                    std::to_string(row_ptrs_.size()) + " for " +
                                    std::to_string(rows) + " rows");
        }
        if (row_ptrs_[0] != 0 ||
            static_cast<size_type>(row_ptrs_[rows]) != values_.size() ||
            col_idxs_.size() != values_.size()) {
            throw DimensionMismatch("inconsistent CSR arrays");
        }
        for (size_type i = 0; i < rows; ++i) {
            if (row_ptrs_[i] > row_ptrs_[i + 1]) {
                throw DimensionMismatch("row_ptrs decrease at row " +
                                        std::to_string(i));
            }
            for (auto k = row_ptrs_[i]; k < row_ptrs_[i + 1]; ++k) {
                if (col_idxs_[k] < 0 || static_cast<size_type>(col_idxs_[k]) >= cols ||
                    (k > row_ptrs_[i] && col_idxs_[k - 1] >= col_idxs_[k])) {
                    throw DimensionMismatch("bad column index in row " +
                                            std::to_string(i));
                }
            }
        }
    }

    void read(const matrix_data<ValueType, IndexType>& input) override
    {
        auto data = input;
        data.validate();
        data.canonicalize();
        const auto rows = data.size.rows;
        const auto nnz = data.nonzeros.size();
        this->set_size(data.size);
        values_.resize_and_reset(nnz);
        col_idxs_.resize_and_reset(nnz);
        row_ptrs_.resize_and_reset(rows + 1);
        row_ptrs_.fill(0);
        for (size_type k = 0; k < nnz; ++k) {
            const auto& nz = data.nonzeros[k];
            values_[k] = nz.value;
            col_idxs_[k] = nz.column;
            ++row_ptrs_[nz.row + 1];
        }
        for (size_type i = 0; i < rows; ++i) {
            row_ptrs_[i + 1] += row_ptrs_[i];
        }
    }

    void write(matrix_data<ValueType, IndexType>& data) const override
    {
        data = matrix_data<ValueType, IndexType>{this->get_size()};
        for (size_type i = 0; i < this->get_size().rows; ++i) {
            for (auto k = row_ptrs_[i]; k < row_ptrs_[i + 1]; ++k) {
                data.nonzeros.push_back(
                    {static_cast<IndexType>(i), col_idxs_[k], values_[k]});
            }
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
        row_ptrs_.set_executor(exec);
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    using Vec = Dense<ValueType>;

    void spmv(const LinOp* alpha, const LinOp* b, const LinOp* beta, LinOp* x) const
    {
        auto db = as<const Vec>(b);
        auto dx = as<Vec>(x);
        const auto rows = this->get_size().rows;
        const size_type m = db->get_size().cols;
        const size_type nnz = values_.size();
        const auto vals = values_.get_const_data();
        const auto cidx = col_idxs_.get_const_data();
        const auto rptr = row_ptrs_.get_const_data();
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        auto xv = dx->get_values();
        const auto xs = dx->get_stride();
        const ValueType* av = alpha ? as<const Vec>(alpha)->get_const_values() : nullptr;
        const ValueType* btv = beta ? as<const Vec>(beta)->get_const_values() : nullptr;
        const size_type ainc = alpha && alpha->get_size().cols > 1 ? 1 : 0;
        const size_type binc = beta && beta->get_size().cols > 1 ? 1 : 0;
        const Traffic traffic{
            m * (kernel::bytes<ValueType>(2 * nnz + (alpha ? 3 * rows : 0)) +
                 kernel::bytes<IndexType>(nnz + rows + 1)),
            m * kernel::bytes<ValueType>(rows)};
        kernel::run_rows(
            *this->get_executor(), alpha ? "csr::advanced_spmv" : "csr::spmv",
            traffic, rows, [&](size_type bg, size_type e) {
                for (size_type i = bg; i < e; ++i) {
                    for (size_type j = 0; j < m; ++j) {
                        ValueType sum{};
                        for (auto k = rptr[i]; k < rptr[i + 1]; ++k) {
                            sum += vals[k] * bv[cidx[k] * bs + j];
                        }
                        if (av == nullptr) {
                            xv[i * xs + j] = sum;
                        } else {
                            const auto bt = btv[j * binc];
                            const auto old = bt == ValueType{} ? ValueType{}
                                                               : bt * xv[i * xs + j];
                            xv[i * xs + j] = av[j * ainc] * sum + old;
                        }
                    }
                }
            });
    }

    Array<ValueType> values_;
    Array<IndexType> col_idxs_;
    Array<IndexType> row_ptrs_;
};


}  // namespace lopa::matrix

#endif  // LOPA_MATRIX_CSR_HPP_
