// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_PRECOND_ILU_HPP_
#define LOPA_PRECOND_ILU_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lopa/core/exception.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"
#include "lopa/solver/triangular.hpp"

namespace lopa::precond {


/// L (unit lower, diagonal stored) and U (upper) with L U ~ A on the
/// sparsity pattern of A.
template <typename ValueType = double>
struct IluFactors {
    std::shared_ptr<const matrix::Csr<ValueType, int32>> l;
    std::shared_ptr<const matrix::Csr<ValueType, int32>> u;
};


enum class IluAlgorithm { exact, parilu };


namespace detail {


/// Sorted pattern of A with every diagonal entry present.
template <typename ValueType>
struct Pattern {
    size_type n;
    std::vector<size_type> row_ptrs;
    std::vector<size_type> cols;
    std::vector<ValueType> vals;
    std::vector<size_type> diag;

    explicit Pattern(matrix_data<ValueType, int32> data) : n{data.size.rows}
    {
        data.canonicalize();
        row_ptrs.assign(n + 1, 0);
        for (const auto& nz : data.nonzeros) {
            ++row_ptrs[nz.row + 1];
        }
        for (size_type i = 0; i < n; ++i) {
            row_ptrs[i + 1] += row_ptrs[i];
        }
        for (const auto& nz : data.nonzeros) {
            cols.push_back(static_cast<size_type>(nz.column));
            vals.push_back(nz.value);
        }
        diag.assign(n, 0);
        for (size_type i = 0; i < n; ++i) {
            bool found = false;
            for (auto k = row_ptrs[i]; k < row_ptrs[i + 1]; ++k) {
                if (cols[k] == i) {
                    diag[i] = k;
                    found = true;
                }
            }
            if (!found) {
                throw Singular("ilu: no diagonal entry in row", i);
            }
        }
    }

    /// Position of (i, j) in the pattern, or npos.
    size_type find(size_type i, size_type j) const
    {
        size_type lo = row_ptrs[i];
        size_type hi = row_ptrs[i + 1];
        while (lo < hi) {
            const auto mid = lo + (hi - lo) / 2;
            if (cols[mid] < j) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo < row_ptrs[i + 1] && cols[lo] == j ? lo : npos;
    }

    static constexpr size_type npos = static_cast<size_type>(-1);
};


/// Splits combined LU values into unit L and U.
template <typename ValueType>
IluFactors<ValueType> split(std::shared_ptr<const Executor> exec,
                            const Pattern<ValueType>& p, const std::vector<ValueType>& lu)
{
    matrix_data<ValueType, int32> l{dim2{p.n}};
    matrix_data<ValueType, int32> u{dim2{p.n}};
    for (size_type i = 0; i < p.n; ++i) {
        for (auto k = p.row_ptrs[i]; k < p.row_ptrs[i + 1]; ++k) {
            const auto r = static_cast<int32>(i);
            const auto c = static_cast<int32>(p.cols[k]);
            if (p.cols[k] < i) {
                l.nonzeros.push_back({r, c, lu[k]});
            } else {
                if (p.cols[k] == i) {
                    l.nonzeros.push_back({r, c, ValueType{1}});
                }
                u.nonzeros.push_back({r, c, lu[k]});
            }
        }
    }
    return {share(matrix::Csr<ValueType, int32>::create(exec, l)),
            share(matrix::Csr<ValueType, int32>::create(exec, u))};
}


}  // namespace detail


/// Incomplete LU with zero fill: the IKJ elimination restricted to the
/// pattern of A.
template <typename ValueType>
IluFactors<ValueType> compute_ilu0(std::shared_ptr<const Executor> exec,
                                   const matrix_data<ValueType, int32>& data)
{
    const detail::Pattern<ValueType> p{data};
    auto lu = p.vals;
    for (size_type i = 0; i < p.n; ++i) {
        for (auto kk = p.row_ptrs[i]; kk < p.row_ptrs[i + 1] && p.cols[kk] < i; ++kk) {
            const auto k = p.cols[kk];
            const auto pivot = lu[p.diag[k]];
            if (pivot == ValueType{}) {
                throw Singular("ilu: zero pivot in row", k);
            }
            lu[kk] /= pivot;
            for (auto jj = kk + 1; jj < p.row_ptrs[i + 1]; ++jj) {
                const auto pos = p.find(k, p.cols[jj]);
                if (pos != detail::Pattern<ValueType>::npos) {
                    lu[jj] -= lu[kk] * lu[pos];
                }
            }
        }
    }
    for (size_type i = 0; i < p.n; ++i) {
        if (lu[p.diag[i]] == ValueType{}) {
            throw Singular("ilu: zero pivot in row", i);
        }
    }
    return detail::split(std::move(exec), p, lu);
}


/// ParILU: fixed-point sweeps of the ILU equations over the pattern, each
/// sweep computed from the previous iterate.
template <typename ValueType>
IluFactors<ValueType> compute_parilu(std::shared_ptr<const Executor> exec,
                                     const matrix_data<ValueType, int32>& data,
                                     size_type sweeps)
{
    const detail::Pattern<ValueType> p{data};
    auto lu = p.vals;
    // Start from L = strictly lower part of A scaled by the diagonal, U = upper part.
    for (size_type i = 0; i < p.n; ++i) {
        for (auto k = p.row_ptrs[i]; k < p.row_ptrs[i + 1]; ++k) {
            if (p.cols[k] < i) {
                const auto d = p.vals[p.diag[p.cols[k]]];
                lu[k] = d == ValueType{} ? ValueType{} : p.vals[k] / d;
            }
        }
    }
    auto next = lu;
    for (size_type sweep = 0; sweep < sweeps; ++sweep) {
        for (size_type i = 0; i < p.n; ++i) {
            for (auto e = p.row_ptrs[i]; e < p.row_ptrs[i + 1]; ++e) {
                const auto j = p.cols[e];
                const auto lim = std::min(i, j);
                ValueType s = p.vals[e];
                for (auto kk = p.row_ptrs[i]; kk < p.row_ptrs[i + 1] && p.cols[kk] < lim;
                     ++kk) {
                    const auto pos = p.find(p.cols[kk], j);
                    if (pos != detail::Pattern<ValueType>::npos) {
                        s -= lu[kk] * lu[pos];
                    }
                }
                if (i > j) {
                    const auto d = lu[p.diag[j]];
                    next[e] = d == ValueType{} ? ValueType{} : s / d;
                } else {
                    next[e] = s;
                }
            }
        }
        std::swap(lu, next);
    }
    for (size_type i = 0; i < p.n; ++i) {
        if (lu[p.diag[i]] == ValueType{}) {
            throw Singular("parilu: zero pivot in row", i);
        }
    }
    return detail::split(std::move(exec), p, lu);
}


/// ILU preconditioner: x = U^-1 L^-1 b through two triangular solvers.
template <typename ValueType = double>
class Ilu : public EnableLinOp<Ilu<ValueType>> {
    using Base = EnableLinOp<Ilu<ValueType>>;

public:
    using value_type = ValueType;
    using Vec = matrix::Dense<ValueType>;
    using Factors = IluFactors<ValueType>;

    struct parameters_type
        : enable_parameters<parameters_type, DefaultFactory<Ilu, parameters_type>> {
        IluAlgorithm algorithm = IluAlgorithm::exact;
        size_type sweeps = 5;
        std::shared_ptr<const LinOpFactory> l_solver;
        std::shared_ptr<const LinOpFactory> u_solver;
        std::shared_ptr<const Factors> factors;

        parameters_type& with_algorithm(IluAlgorithm a)
        {
            algorithm = a;
            return *this;
        }
        parameters_type& with_sweeps(size_type s)
        {
            sweeps = s;
            return *this;
        }
        parameters_type& with_l_solver(std::shared_ptr<const LinOpFactory> f)
        {
            l_solver = std::move(f);
            return *this;
        }
        parameters_type& with_u_solver(std::shared_ptr<const LinOpFactory> f)
        {
            u_solver = std::move(f);
            return *this;
        }
        /// Precomputed factors; the system matrix then only fixes the size.
        parameters_type& with_factors(std::shared_ptr<const Factors> f)
        {
            factors = std::move(f);
            return *this;
        }
    };
    using Factory = DefaultFactory<Ilu, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "ilu"; }

    Ilu(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
        : Base(factory->get_executor(), system_matrix->get_size()),
          params_{factory->get_parameters()}
    {
        const auto exec = this->get_executor();
        if (!system_matrix->get_size().is_square()) {
            throw DimensionMismatch("ilu of non-square operator " +
                                    lopa::detail::dims(system_matrix->get_size()));
        }
        if (params_.factors) {
            factors_ = *params_.factors;
            if (!factors_.l || !factors_.u ||
                factors_.l->get_size() != system_matrix->get_size() ||
                factors_.u->get_size() != system_matrix->get_size()) {
                throw DimensionMismatch("ilu factors do not match the system size");
            }
        } else {
            const auto data = matrix::extract_data<ValueType>(system_matrix.get());
            factors_ = params_.algorithm == IluAlgorithm::exact
                           ? compute_ilu0(exec, data)
                           : compute_parilu(exec, data, params_.sweeps);
        }
        auto l_factory = params_.l_solver
                             ? params_.l_solver
                             : share(solver::LowerTrs<ValueType>::build()
                                         .with_unit_diagonal()
                                         .on(exec));
        auto u_factory = params_.u_solver
                             ? params_.u_solver
                             : share(solver::UpperTrs<ValueType>::build().on(exec));
        l_solver_ = l_factory->generate(factors_.l);
        u_solver_ = u_factory->generate(factors_.u);
    }

    const parameters_type& get_parameters() const noexcept { return params_; }
    const Factors& get_factors() const noexcept { return factors_; }
    const std::shared_ptr<const LinOp>& get_l_solver() const noexcept { return l_solver_; }
    const std::shared_ptr<const LinOp>& get_u_solver() const noexcept { return u_solver_; }

protected:
    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        auto tmp = Vec::create(this->get_executor(), b->get_size());
        l_solver_->apply(b, tmp.get());
        u_solver_->apply(tmp.get(), x);
    }
    using Base::apply_impl;

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        l_solver_ = std::shared_ptr<const LinOp>(l_solver_->clone_linop(exec));
        u_solver_ = std::shared_ptr<const LinOp>(u_solver_->clone_linop(exec));
        Base::rebind_executor(std::move(exec));
    }

    std::string log_name() const override { return type_name(); }

private:
    parameters_type params_;
    Factors factors_;
    std::shared_ptr<const LinOp> l_solver_;
    std::shared_ptr<const LinOp> u_solver_;
};


}  // namespace lopa::precond

#endif  // LOPA_PRECOND_ILU_HPP_
