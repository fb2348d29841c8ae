// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_STENCIL_HPP_
#define LOPA_MATRIX_STENCIL_HPP_

#include <memory>
#include <string>
#include <utility>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"

namespace lopa::matrix {


/// Matrix-free tridiagonal operator x_i = l b_{i-1} + c b_i + r b_{i+1}.
/// Only the simple apply is written out; the advanced one is synthesized.
template <typename ValueType = double>
class StencilMatrix : public EnableLinOp<StencilMatrix<ValueType>> {
    using Base = EnableLinOp<StencilMatrix<ValueType>>;

public:
    using value_type = ValueType;

    StencilMatrix(std::shared_ptr<const Executor> exec, size_type n,
                  ValueType left, ValueType center, ValueType right)
        : Base(exec, dim2{n}), coefficients_{exec, {left, center, right}}
    {}

    static std::unique_ptr<StencilMatrix> create(std::shared_ptr<const Executor> exec,
                                                 size_type n, ValueType left,
                                                 ValueType center, ValueType right)
    {
        return std::make_unique<StencilMatrix>(std::move(exec), n, left, center,
                                               right);
    }

    static const char* type_name() noexcept { return "stencil"; }

    const Array<ValueType>& get_coefficients() const noexcept { return coefficients_; }

    /// Assembled CSR equivalent.
    template <typename IndexType = int32>
    std::unique_ptr<Csr<ValueType, IndexType>> to_csr() const
    {
        const auto n = this->get_size().rows;
        matrix_data<ValueType, IndexType> data{this->get_size()};
        for (size_type i = 0; i < n; ++i) {
            const auto r = static_cast<IndexType>(i);
            if (i > 0) {
                data.nonzeros.push_back({r, r - 1, coefficients_[0]});
            }
            data.nonzeros.push_back({r, r, coefficients_[1]});
            if (i + 1 < n) {
                data.nonzeros.push_back({r, r + 1, coefficients_[2]});
            }
        }
        return Csr<ValueType, IndexType>::create(this->get_executor(), data);
    }

protected:
    using Vec = Dense<ValueType>;

    class stencil_operation : public Operation {
    public:
        stencil_operation(const ValueType* coefs, const Vec* b, Vec* x)
            : coefs_{coefs}, b_{b}, x_{x}
        {}

        const char* name() const noexcept override { return "stencil::apply"; }

        Traffic traffic() const override
        {
            const auto n = b_->get_size().rows * b_->get_size().cols;
            return {kernel::bytes<ValueType>(3 * n), kernel::bytes<ValueType>(n)};
        }

        void run(const ReferenceExecutor&) const override
        {
            rows(0, x_->get_size().rows);
        }

        void run(const ParallelExecutor& exec) const override
        {
            exec.parallel_for(x_->get_size().rows,
                              [this](size_type b, size_type e) { rows(b, e); });
        }

    private:
        void rows(size_type begin, size_type end) const
        {
            const auto n = x_->get_size().rows;
            const auto m = x_->get_size().cols;
            for (size_type i = begin; i < end; ++i) {
                for (size_type j = 0; j < m; ++j) {
                    auto sum = coefs_[1] * b_->at(i, j);
                    if (i > 0) {
                        sum += coefs_[0] * b_->at(i - 1, j);
                    }
                    if (i + 1 < n) {
                        sum += coefs_[2] * b_->at(i + 1, j);
                    }
                    x_->at(i, j) = sum;
                }
            }
        }

        const ValueType* coefs_;
        const Vec* b_;
        Vec* x_;
    };

    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        this->get_executor()->run(stencil_operation{
            coefficients_.get_const_data(), as<const Vec>(b), as<Vec>(x)});
    }

    using Base::apply_impl;

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        coefficients_.set_executor(exec);
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    Array<ValueType> coefficients_;
};


}  // namespace lopa::matrix

#endif  // LOPA_MATRIX_STENCIL_HPP_
