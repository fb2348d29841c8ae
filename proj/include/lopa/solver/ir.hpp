// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_IR_HPP_
#define LOPA_SOLVER_IR_HPP_

#include <memory>
#include <utility>

#include "lopa/core/kernel.hpp"
#include "lopa/solver/solver_base.hpp"

namespace lopa::solver {


/// Iterative refinement: x += S(b - A x) with an inner solver S. Without
/// one, S is the identity and the method is Richardson iteration.
template <typename ValueType = double>
class Ir : public IterativeSolver<ValueType, Ir<ValueType>> {
    using Base = IterativeSolver<ValueType, Ir<ValueType>>;
    friend Base;

public:
    using Vec = typename Base::Vec;

    struct parameters_type
        : solver_parameters<parameters_type, DefaultFactory<Ir, parameters_type>> {
        /// Inner solver factory, generated on the system matrix.
        parameters_type& with_solver(std::shared_ptr<const LinOpFactory> factory)
        {
            return this->with_preconditioner(std::move(factory));
        }

        parameters_type& with_generated_solver(std::shared_ptr<const LinOp> op)
        {
            return this->with_generated_preconditioner(std::move(op));
        }
    };
    using Factory = DefaultFactory<Ir, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "ir"; }

    Ir(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
        : Base(factory->get_executor(), factory->get_parameters(),
               std::move(system_matrix)),
          params_{factory->get_parameters()}
    {}

    const parameters_type& get_parameters() const noexcept { return params_; }
    const std::shared_ptr<const LinOp>& get_solver() const noexcept
    {
        return this->get_preconditioner();
    }

protected:
    void solve(const Vec* b, Vec* x) const
    {
        using kernel::bytes;
        using V = ValueType;
        typename Base::SolveState state;
        if (!this->begin_solve(b, x, state)) {
            return;
        }
        const auto& exec = *this->get_executor();
        const size_type n = this->get_size().rows;
        const size_type m = b->get_size().cols;
        auto r = this->vec(n, m);
        auto z = this->vec(n, m);
        auto [neg_one, one] = this->residual_scalars();
        r->copy_values(b);
        this->get_system_matrix()->apply(neg_one.get(), x, one.get(), r.get());
        this->make_criterion(b, x, r.get(), state);

        const auto status = state.status.get_data();
        const auto xv = x->get_values();
        const auto xs = x->get_stride();
        const auto zv = z->get_const_values();
        size_type iter = 0;
        for (;;) {
            const bool done = this->check(state, iter, r.get(), nullptr, x);
            if (iter > 0) {
                this->log_iteration(state, iter);
            }
            if (done) {
                break;
            }
            z->fill(V{});
            this->get_solver()->apply(r.get(), z.get());
            detail::run_active(exec, "ir::update", {bytes<V>(2 * n * m), bytes<V>(n * m)},
                               n, m, status, [&](size_type i, size_type j) {
                                   xv[i * xs + j] += zv[i * m + j];
                               });
            r->copy_values(b);
            this->get_system_matrix()->apply(neg_one.get(), x, one.get(), r.get());
            ++iter;
        }
        this->finish_solve(state, iter);
    }

private:
    parameters_type params_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_IR_HPP_
