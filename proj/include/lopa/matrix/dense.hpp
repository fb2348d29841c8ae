// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_DENSE_HPP_
#define LOPA_MATRIX_DENSE_HPP_

#include <cmath>
#include <initializer_list>
#include <memory>
#include <string>
#include <utility>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/matrix_data.hpp"

namespace lopa::matrix {


/// Row-major dense matrix; also the multi-vector type every apply takes.
template <typename ValueType = double>
class Dense : public EnableLinOp<Dense<ValueType>>,
              public VectorOps,
              public MatrixDataIo<ValueType, int32> {
    using Base = EnableLinOp<Dense<ValueType>>;

public:
    using value_type = ValueType;

    explicit Dense(std::shared_ptr<const Executor> exec, dim2 size = {},
                   size_type stride = 0)
        : Base(exec, size),
          stride_{stride == 0 ? size.cols : stride},
          values_{exec, size.rows * (stride == 0 ? size.cols : stride)}
    {
        check_stride();
    }

    Dense(std::shared_ptr<const Executor> exec, dim2 size,
          Array<ValueType> values, size_type stride = 0)
        : Base(exec, size),
          stride_{stride == 0 ? size.cols : stride},
          values_{exec}
    {
        check_stride();
        if (values.size() < size.rows * stride_) {
            throw DimensionMismatch("dense storage of " +
                                    std::to_string(values.size()) +
                                    " elements for " + detail::dims(size));
        }
        values_ = std::move(values);
    }

    static std::unique_ptr<Dense> create(std::shared_ptr<const Executor> exec,
                                         dim2 size = {}, size_type stride = 0)
    {
        return std::make_unique<Dense>(std::move(exec), size, stride);
    }

    static std::unique_ptr<Dense> create(std::shared_ptr<const Executor> exec,
                                         dim2 size, Array<ValueType> values,
                                         size_type stride = 0)
    {
        return std::make_unique<Dense>(std::move(exec), size, std::move(values),
                                       stride);
    }

    /// Column vector with the given entries.
    static std::unique_ptr<Dense> create_column(std::shared_ptr<const Executor> exec,
                                                std::initializer_list<ValueType> init)
    {
        Array<ValueType> values{exec, init};
        return create(std::move(exec), {init.size(), 1}, std::move(values));
    }

    /// Matrix from row-major nested lists.
    static std::unique_ptr<Dense> create_rows(
        std::shared_ptr<const Executor> exec,
        std::initializer_list<std::initializer_list<ValueType>> rows)
    {
        const size_type r = rows.size();
        const size_type c = r > 0 ? rows.begin()->size() : 0;
        auto result = create(std::move(exec), {r, c});
        size_type i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) {
                throw DimensionMismatch("ragged dense initializer");
            }
            size_type j = 0;
            for (const auto& v : row) {
                result->at(i, j++) = v;
            }
            ++i;
        }
        return result;
    }

    static std::unique_ptr<Dense> create_scalar(std::shared_ptr<const Executor> exec,
                                                ValueType value)
    {
        auto result = create(std::move(exec), dim2{1});
        result->at(0, 0) = value;
        return result;
    }

    /// Host-side initialization, not booked as traffic.
    static std::unique_ptr<Dense> create_filled(std::shared_ptr<const Executor> exec,
                                                dim2 size, ValueType value)
    {
        auto result = create(std::move(exec), size);
        for (size_type i = 0; i < size.rows; ++i) {
            for (size_type j = 0; j < size.cols; ++j) {
                result->at(i, j) = value;
            }
        }
        return result;
    }

    static const char* type_name() noexcept { return "dense"; }

    size_type get_stride() const noexcept { return stride_; }
    size_type get_num_stored_elements() const noexcept { return values_.size(); }

    ValueType* get_values()
    {
        this->assert_usable();
        return values_.get_data();
    }
    const ValueType* get_const_values() const
    {
        this->assert_usable();
        return values_.get_const_data();
    }
    const Array<ValueType>& get_array() const noexcept { return values_; }

    ValueType& at(size_type i, size_type j) noexcept
    {
        return values_[i * stride_ + j];
    }
    const ValueType& at(size_type i, size_type j) const noexcept
    {
        return values_[i * stride_ + j];
    }
    /// Element `i` of a single column.
    ValueType& at(size_type i) noexcept { return values_[i * stride_]; }
    const ValueType& at(size_type i) const noexcept { return values_[i * stride_]; }

    void fill(ValueType value)
    {
        this->assert_usable();
        const auto [rows, cols] = dims();
        auto v = values_.get_data();
        const auto s = stride_;
        kernel::run_rows(*this->get_executor(), "dense::fill",
                         {0, kernel::bytes<ValueType>(rows * cols)}, rows,
                         [&](size_type b, size_type e) {
                             for (size_type i = b; i < e; ++i) {
                                 for (size_type j = 0; j < cols; ++j) {
                                     v[i * s + j] = value;
                                 }
                             }
                         });
    }

    std::unique_ptr<LinOp> create_vector(dim2 size) const override
    {
        return create(this->get_executor(), size);
    }

    void scale(const LinOp* alpha) override
    {
        this->assert_usable();
        auto a = scalars(alpha);
        const auto [rows, cols] = dims();
        auto v = values_.get_data();
        const auto s = stride_;
        const size_type as = a->get_size().cols == 1 ? 0 : 1;
        const auto av = a->get_const_values();
        kernel::run_rows(*this->get_executor(), "dense::scale",
                         {kernel::bytes<ValueType>(2 * rows * cols),
                          kernel::bytes<ValueType>(rows * cols)},
                         rows, [&](size_type b, size_type e) {
                             for (size_type i = b; i < e; ++i) {
                                 for (size_type j = 0; j < cols; ++j) {
                                     const auto f = av[j * as];
                                     v[i * s + j] = f == ValueType{} ? ValueType{}
                                                                     : f * v[i * s + j];
                                 }
                             }
                         });
    }

    void add_scaled(const LinOp* alpha, const LinOp* b) override
    {
        this->assert_usable();
        auto a = scalars(alpha);
        auto db = same_shape(b);
        const auto [rows, cols] = dims();
        auto v = values_.get_data();
        const auto s = stride_;
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        const size_type as = a->get_size().cols == 1 ? 0 : 1;
        const auto av = a->get_const_values();
        kernel::run_rows(*this->get_executor(), "dense::add_scaled",
                         {kernel::bytes<ValueType>(3 * rows * cols),
                          kernel::bytes<ValueType>(rows * cols)},
                         rows, [&](size_type bg, size_type e) {
                             for (size_type i = bg; i < e; ++i) {
                                 for (size_type j = 0; j < cols; ++j) {
                                     v[i * s + j] += av[j * as] * bv[i * bs + j];
                                 }
                             }
                         });
    }

    void copy_values(const LinOp* src) override
    {
        this->assert_usable();
        auto d = same_shape(src);
        const auto [rows, cols] = dims();
        auto v = values_.get_data();
        const auto s = stride_;
        const auto sv = d->get_const_values();
        const auto ss = d->get_stride();
        kernel::run_rows(*this->get_executor(), "dense::copy",
                         {kernel::bytes<ValueType>(rows * cols),
                          kernel::bytes<ValueType>(rows * cols)},
                         rows, [&](size_type b, size_type e) {
                             for (size_type i = b; i < e; ++i) {
                                 for (size_type j = 0; j < cols; ++j) {
                                     v[i * s + j] = sv[i * ss + j];
                                 }
                             }
                         });
    }

    /// result(0, j) = sum_i this(i, j) * b(i, j).
    void compute_dot(const LinOp* b, LinOp* result) const
    {
        this->assert_usable();
        auto db = same_shape(b);
        auto r = result_row(result);
        const auto [rows, cols] = dims();
        const auto v = values_.get_const_data();
        const auto s = stride_;
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        const bool self = db == this;
        kernel::run_reduction<ValueType>(
            *this->get_executor(), "dense::dot",
            {kernel::bytes<ValueType>((self ? 1 : 2) * rows * cols),
             kernel::bytes<ValueType>(cols)},
            rows, cols,
            [&](size_type bg, size_type e, ValueType* partial) {
                for (size_type i = bg; i < e; ++i) {
                    for (size_type j = 0; j < cols; ++j) {
                        partial[j] += v[i * s + j] * bv[i * bs + j];
                    }
                }
            },
            [&](const ValueType* sums) {
                for (size_type j = 0; j < cols; ++j) {
                    r->at(0, j) = sums[j];
                }
            });
    }

    /// result(0, j) = Euclidean norm of column j.
    void compute_norm2(LinOp* result,
                       TrafficChannel channel = TrafficChannel::solver) const
    {
        this->assert_usable();
        auto r = result_row(result);
        const auto [rows, cols] = dims();
        const auto v = values_.get_const_data();
        const auto s = stride_;
        kernel::run_reduction<ValueType>(
            *this->get_executor(), "dense::norm2",
            {kernel::bytes<ValueType>(rows * cols), kernel::bytes<ValueType>(cols)},
            rows, cols,
            [&](size_type bg, size_type e, ValueType* partial) {
                for (size_type i = bg; i < e; ++i) {
                    for (size_type j = 0; j < cols; ++j) {
                        const auto x = v[i * s + j];
                        partial[j] += x * x;
                    }
                }
            },
            [&](const ValueType* sums) {
                for (size_type j = 0; j < cols; ++j) {
                    r->at(0, j) = std::sqrt(sums[j]);
                }
            },
            channel);
    }

    void read(const matrix_data<ValueType, int32>& data) override
    {
        this->assert_usable();
        data.validate();
        this->set_size(data.size);
        stride_ = data.size.cols;
        values_.resize_and_reset(data.size.rows * stride_);
        values_.fill(ValueType{});
        for (const auto& nz : data.nonzeros) {
            at(nz.row, nz.column) += nz.value;
        }
    }

    /// Row-major triples; explicit zeros are dropped.
    void write(matrix_data<ValueType, int32>& data) const override
    {
        this->assert_usable();
        const auto [rows, cols] = dims();
        data = matrix_data<ValueType, int32>{this->get_size()};
        for (size_type i = 0; i < rows; ++i) {
            for (size_type j = 0; j < cols; ++j) {
                if (at(i, j) != ValueType{}) {
                    data.nonzeros.push_back(
                        {static_cast<int32>(i), static_cast<int32>(j), at(i, j)});
                }
            }
        }
    }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        gemv(nullptr, b, nullptr, x);
    }

    void apply_impl(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                    LinOp* x) const override
    {
        gemv(alpha, b, beta, x);
    }

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        values_.set_executor(exec);
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    std::pair<size_type, size_type> dims() const noexcept
    {
        return {this->get_size().rows, this->get_size().cols};
    }

    void check_stride() const
    {
        if (stride_ < this->get_size().cols) {
            throw DimensionMismatch("stride " + std::to_string(stride_) +
                                    " below column count " +
                                    std::to_string(this->get_size().cols));
        }
    }

    const Dense* same_shape(const LinOp* other) const
    {
        auto d = as<const Dense>(other);
        if (d == nullptr || d->get_size() != this->get_size()) {
            throw DimensionMismatch(
                "operand " + (d ? detail::dims(d->get_size()) : std::string{"null"}) +
                " vs " + detail::dims(this->get_size()));
        }
        return d;
    }

    const Dense* scalars(const LinOp* alpha) const
    {
        auto a = as<const Dense>(alpha);
        if (a == nullptr || a->get_size().rows != 1 ||
            (a->get_size().cols != 1 && a->get_size().cols != this->get_size().cols)) {
            throw DimensionMismatch("scalar operand must be 1x1 or 1xcols");
        }
        return a;
    }

    Dense* result_row(LinOp* result) const
    {
        auto r = as<Dense>(result);
        if (r == nullptr || r->get_size() != dim2{1, this->get_size().cols}) {
            throw DimensionMismatch("reduction result must be 1x" +
                                    std::to_string(this->get_size().cols));
        }
        return r;
    }

    /// x = A b, or x = alpha A b + beta x when alpha is given.
    void gemv(const LinOp* alpha, const LinOp* b, const LinOp* beta, LinOp* x) const
    {
        auto db = as<const Dense>(b);
        auto dx = as<Dense>(x);
        const Dense* da = alpha ? dx->scalars(alpha) : nullptr;
        const Dense* dbeta = beta ? dx->scalars(beta) : nullptr;
        const auto [rows, cols] = dims();
        const size_type m = db->get_size().cols;
        const auto av = values_.get_const_data();
        const auto s = stride_;
        const auto bv = db->get_const_values();
        const auto bs = db->get_stride();
        auto xv = dx->get_values();
        const auto xs = dx->get_stride();
        const auto alpha_v = da ? da->get_const_values() : nullptr;
        const auto beta_v = dbeta ? dbeta->get_const_values() : nullptr;
        const size_type ainc = da && da->get_size().cols > 1 ? 1 : 0;
        const size_type binc = dbeta && dbeta->get_size().cols > 1 ? 1 : 0;
        const uint64 extra = da ? 3 * rows * m : 0;
        kernel::run_rows(
            *this->get_executor(), da ? "dense::advanced_spmv" : "dense::spmv",
            {kernel::bytes<ValueType>(rows * cols * m + cols * m + extra),
             kernel::bytes<ValueType>(rows * m)},
            rows, [&](size_type bg, size_type e) {
                for (size_type i = bg; i < e; ++i) {
                    for (size_type j = 0; j < m; ++j) {
                        ValueType sum{};
                        for (size_type k = 0; k < cols; ++k) {
                            sum += av[i * s + k] * bv[k * bs + j];
                        }
                        if (alpha_v == nullptr) {
                            xv[i * xs + j] = sum;
                        } else {
                            const auto bt = beta_v[j * binc];
                            const auto old = bt == ValueType{} ? ValueType{}
                                                               : bt * xv[i * xs + j];
                            xv[i * xs + j] = alpha_v[j * ainc] * sum + old;
                        }
                    }
                }
            });
    }

    size_type stride_;
    Array<ValueType> values_;
};


}  // namespace lopa::matrix

#endif  // LOPA_MATRIX_DENSE_HPP_
