// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_CG_HPP_
#define LOPA_SOLVER_CG_HPP_

#include <memory>
#include <utility>

#include "lopa/core/kernel.hpp"
#include "lopa/solver/solver_base.hpp"

namespace lopa::solver {


/// Preconditioned conjugate gradients for SPD systems.
template <typename ValueType = double>
class Cg : public IterativeSolver<ValueType, Cg<ValueType>> {
    using Base = IterativeSolver<ValueType, Cg<ValueType>>;
    friend Base;

public:
    using Vec = typename Base::Vec;

    struct parameters_type
        : solver_parameters<parameters_type, DefaultFactory<Cg, parameters_type>> {};
    using Factory = DefaultFactory<Cg, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "cg"; }

    Cg(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
        : Base(factory->get_executor(), factory->get_parameters(),
               std::move(system_matrix)),
          params_{factory->get_parameters()}
    {}

    const parameters_type& get_parameters() const noexcept { return params_; }

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
        const auto nm = n * m;

        auto r = this->vec(n, m);
        auto z = this->vec(n, m);
        auto p = this->vec(n, m);
        auto q = this->vec(n, m);
        auto prev_rho = this->vec(1, m);
        auto rho = this->vec(1, m);
        auto beta = this->vec(1, m);
        auto status = state.status.get_data();

        {
            const auto bv = b->get_const_values();
            const auto bs = b->get_stride();
            auto rv = r->get_values();
            auto zv = z->get_values();
            auto pv = p->get_values();
            auto qv = q->get_values();
            auto prv = prev_rho->get_values();
            auto rhv = rho->get_values();
            for (size_type j = 0; j < m; ++j) {
                prv[j] = V{1};
                rhv[j] = V{};
            }
            kernel::run_rows(exec, "cg::initialize",
                             {bytes<V>(nm), bytes<V>(4 * nm + 2 * m)}, n,
                             [&](size_type bg, size_type e) {
                                 for (size_type i = bg; i < e; ++i) {
                                     for (size_type j = 0; j < m; ++j) {
                                         rv[i * m + j] = bv[i * bs + j];
                                         zv[i * m + j] = pv[i * m + j] =
                                             qv[i * m + j] = V{};
                                     }
                                 }
                             });
        }
        auto [neg_one, one] = this->residual_scalars();
        this->get_system_matrix()->apply(neg_one.get(), x, one.get(), r.get());
        this->make_criterion(b, x, r.get(), state);

        size_type iter = 0;
        for (;;) {
            const bool done = this->check(state, iter, r.get(), nullptr, x);
            if (iter > 0) {
                this->log_iteration(state, iter);
            }
            if (done) {
                break;
            }
            this->get_preconditioner()->apply(r.get(), z.get());
            r->compute_dot(z.get(), rho.get());
            {
                const auto zv = z->get_const_values();
                auto pv = p->get_values();
                const auto rhv = rho->get_const_values();
                const auto prv = prev_rho->get_const_values();
                kernel::run_rows(exec, "cg::step_1",
                                 {bytes<V>(4 * nm), bytes<V>(nm)}, n,
                                 [&](size_type bg, size_type e) {
                                     for (size_type i = bg; i < e; ++i) {
                                         for (size_type j = 0; j < m; ++j) {
                                             if (status[j].has_stopped()) {
                                                 continue;
                                             }
                                             const auto t =
                                                 detail::safe_divide(rhv[j], prv[j]);
                                             pv[i * m + j] =
                                                 zv[i * m + j] + t * pv[i * m + j];
                                         }
                                     }
                                 });
            }
            this->get_system_matrix()->apply(p.get(), q.get());
            p->compute_dot(q.get(), beta.get());
            for (size_type j = 0; j < m; ++j) {
                if (beta->at(0, j) <= V{} && rho->at(0, j) != V{}) {
                    this->mark_breakdown(state, j, iter);
                }
            }
            {
                auto xv = x->get_values();
                const auto xs = x->get_stride();
                auto rv = r->get_values();
                const auto pv = p->get_const_values();
                const auto qv = q->get_const_values();
                const auto rhv = rho->get_const_values();
                const auto btv = beta->get_const_values();
                kernel::run_rows(exec, "cg::step_2",
                                 {bytes<V>(6 * nm), bytes<V>(2 * nm)}, n,
                                 [&](size_type bg, size_type e) {
                                     for (size_type i = bg; i < e; ++i) {
                                         for (size_type j = 0; j < m; ++j) {
                                             if (status[j].has_stopped()) {
                                                 continue;
                                             }
                                             const auto t =
                                                 detail::safe_divide(rhv[j], btv[j]);
                                             xv[i * xs + j] += t * pv[i * m + j];
                                             rv[i * m + j] -= t * qv[i * m + j];
                                         }
                                     }
                                 });
            }
            std::swap(prev_rho, rho);
            ++iter;
        }
        this->finish_solve(state, iter);
    }

private:
    parameters_type params_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_CG_HPP_
