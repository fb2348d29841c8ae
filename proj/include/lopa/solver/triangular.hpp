// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_TRIANGULAR_HPP_
#define LOPA_SOLVER_TRIANGULAR_HPP_

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"

namespace lopa::solver {
namespace detail {


/// Forward or backward substitution with a Csr factor. Rows are grouped into
/// dependency levels at construction; the Parallel executor processes one
/// level at a time and each row is computed exactly as in the sequential
/// sweep.
template <typename ValueType, bool Lower>
class TriangularSolve {
public:
    using Csr = matrix::Csr<ValueType, int32>;
    using Vec = matrix::Dense<ValueType>;

    TriangularSolve(std::shared_ptr<const LinOp> input, bool unit_diagonal)
        : unit_diagonal_{unit_diagonal}
    {
        if (!input->get_size().is_square()) {
            throw DimensionMismatch("triangular solve with non-square factor " +
                                    lopa::detail::dims(input->get_size()));
        }
        if (auto csr = std::dynamic_pointer_cast<const Csr>(input)) {
            factor_ = std::move(csr);
        } else {
            factor_ = share(matrix::convert_to<Csr>(input.get()));
        }
        analyze();
    }

    const std::shared_ptr<const Csr>& get_factor() const noexcept { return factor_; }
    bool unit_diagonal() const noexcept { return unit_diagonal_; }
    size_type num_levels() const noexcept { return level_ptrs_.size() - 1; }

    void rebind(std::shared_ptr<const Executor> exec)
    {
        factor_ = share(factor_->clone_concrete(std::move(exec)));
    }

    void apply(const Executor& exec, const Vec* b, Vec* x) const
    {
        using kernel::bytes;
        const size_type n = factor_->get_size().rows;
        const size_type m = b->get_size().cols;
        const size_type nnz = factor_->get_num_stored_elements();
        const auto vals = factor_->get_const_values();
        const auto cols = factor_->get_const_col_idxs();
        const auto rptr = factor_->get_const_row_ptrs();
        const auto bv = b->get_const_values();
        const auto bs = b->get_stride();
        const auto xv = x->get_values();
        const auto xs = x->get_stride();
        auto row = [&](size_type i) {
            for (size_type j = 0; j < m; ++j) {
                auto sum = bv[i * bs + j];
                ValueType diag{1};
                for (auto k = rptr[i]; k < rptr[i + 1]; ++k) {
                    const auto c = static_cast<size_type>(cols[k]);
                    if (c == i) {
                        diag = unit_diagonal_ ? ValueType{1} : vals[k];
                    } else {
                        sum -= vals[k] * xv[c * xs + j];
                    }
                }
                xv[i * xs + j] = sum / diag;
            }
        };
        const Traffic traffic{
            m * (bytes<ValueType>(2 * nnz + n) + bytes<int32>(nnz + n + 1)),
            m * bytes<ValueType>(n)};
        auto op = kernel::make_operation(
            Lower ? "lower_trs::solve" : "upper_trs::solve", traffic,
            [&](const ReferenceExecutor&) {
                for (size_type s = 0; s < n; ++s) {
                    row(Lower ? s : n - 1 - s);
                }
            },
            [&](const ParallelExecutor& par) {
                for (size_type l = 0; l + 1 < level_ptrs_.size(); ++l) {
                    const auto begin = level_ptrs_[l];
                    const auto count = level_ptrs_[l + 1] - begin;
                    par.parallel_for(count, [&](size_type bg, size_type e) {
                        for (size_type t = bg; t < e; ++t) {
                            row(level_rows_[begin + t]);
                        }
                    });
                }
            });
        exec.run(op);
    }

private:
    void analyze()
    {
        const size_type n = factor_->get_size().rows;
        const auto vals = factor_->get_const_values();
        const auto cols = factor_->get_const_col_idxs();
        const auto rptr = factor_->get_const_row_ptrs();
        std::vector<size_type> level(n, 0);
        size_type max_level = 0;
        for (size_type s = 0; s < n; ++s) {
            const size_type i = Lower ? s : n - 1 - s;
            bool has_diag = false;
            size_type lvl = 0;
            for (auto k = rptr[i]; k < rptr[i + 1]; ++k) {
                const auto c = static_cast<size_type>(cols[k]);
                if (c == i) {
                    has_diag = vals[k] != ValueType{};
                } else if (Lower ? c > i : c < i) {
                    throw BadParameter(std::string{Lower ? "lower" : "upper"} +
                                       " triangular factor has an entry at (" +
                                       std::to_string(i) + ", " + std::to_string(c) +
                                       ")");
                } else {
                    lvl = std::max(lvl, level[c] + 1);
                }
            }
            if (!unit_diagonal_ && !has_diag) {
                throw Singular("triangular factor has a zero diagonal entry in row", i);
            }
            level[i] = lvl;
            max_level = std::max(max_level, lvl);
        }
        level_ptrs_.assign(n == 0 ? 1 : max_level + 2, 0);
        for (size_type i = 0; i < n; ++i) {
            ++level_ptrs_[level[i] + 1];
        }
        for (size_type l = 1; l < level_ptrs_.size(); ++l) {
            level_ptrs_[l] += level_ptrs_[l - 1];
        }
        level_rows_.assign(n, 0);
        auto fill = level_ptrs_;
        for (size_type i = 0; i < n; ++i) {
            level_rows_[fill[level[i]]++] = i;
        }
    }

    bool unit_diagonal_;
    std::shared_ptr<const Csr> factor_;
    std::vector<size_type> level_ptrs_;
    std::vector<size_type> level_rows_;
};


template <typename Derived, typename Factory>
struct triangular_parameters : enable_parameters<Derived, Factory> {
    bool unit_diagonal = false;

    Derived& with_unit_diagonal(bool value = true)
    {
        unit_diagonal = value;
        return static_cast<Derived&>(*this);
    }
};


template <typename ValueType, bool Lower, typename Concrete>
class TriangularSolver : public EnableLinOp<Concrete> {
    using Base = EnableLinOp<Concrete>;

public:
    using value_type = ValueType;
    using Vec = matrix::Dense<ValueType>;
    using Csr = matrix::Csr<ValueType, int32>;

    const std::shared_ptr<const Csr>& get_system_matrix() const noexcept
    {
        return solve_.get_factor();
    }
    bool has_unit_diagonal() const noexcept { return solve_.unit_diagonal(); }
    /// Number of dependency levels of the substitution.
    size_type get_num_levels() const noexcept { return solve_.num_levels(); }

protected:
    TriangularSolver(std::shared_ptr<const Executor> exec,
                     std::shared_ptr<const LinOp> factor, bool unit_diagonal)
        : Base(exec, factor->get_size()), solve_{std::move(factor), unit_diagonal}
    {}

    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        auto db = as<const Vec>(b);
        auto dx = as<Vec>(x);
        solve_.apply(*this->get_executor(), db, dx);
    }
    using Base::apply_impl;

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        solve_.rebind(exec);
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return Concrete::type_name(); }

private:
    TriangularSolve<ValueType, Lower> solve_;
};


}  // namespace detail


/// Solves L x = b by forward substitution. Entries above the diagonal are
/// rejected; with `unit_diagonal` any stored diagonal is ignored.
template <typename ValueType = double>
class LowerTrs : public detail::TriangularSolver<ValueType, true, LowerTrs<ValueType>> {
    using Base = detail::TriangularSolver<ValueType, true, LowerTrs<ValueType>>;

public:
    struct parameters_type
        : detail::triangular_parameters<parameters_type,
                                        DefaultFactory<LowerTrs, parameters_type>> {};
    using Factory = DefaultFactory<LowerTrs, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "lower_trs"; }

    LowerTrs(const Factory* factory, std::shared_ptr<const LinOp> factor)
        : Base(factory->get_executor(), std::move(factor),
               factory->get_parameters().unit_diagonal)
    {}
};


/// Solves U x = b by backward substitution.
template <typename ValueType = double>
class UpperTrs : public detail::TriangularSolver<ValueType, false, UpperTrs<ValueType>> {
    using Base = detail::TriangularSolver<ValueType, false, UpperTrs<ValueType>>;

public:
    struct parameters_type
        : detail::triangular_parameters<parameters_type,
                                        DefaultFactory<UpperTrs, parameters_type>> {};
    using Factory = DefaultFactory<UpperTrs, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "upper_trs"; }

    UpperTrs(const Factory* factory, std::shared_ptr<const LinOp> factor)
        : Base(factory->get_executor(), std::move(factor),
               factory->get_parameters().unit_diagonal)
    {}
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_TRIANGULAR_HPP_
