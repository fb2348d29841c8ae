// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_BICGSTAB_HPP_
#define LOPA_SOLVER_BICGSTAB_HPP_

#include <memory>
#include <utility>

#include "lopa/core/kernel.hpp"
#include "lopa/solver/solver_base.hpp"

namespace lopa::solver {


/// Stabilized bi-conjugate gradients. Iterations are counted in halves; the
/// check after the first half uses the intermediate residual s, and columns
/// it stops get x += alpha y before the solve returns.
template <typename ValueType = double>
class Bicgstab : public IterativeSolver<ValueType, Bicgstab<ValueType>> {
    using Base = IterativeSolver<ValueType, Bicgstab<ValueType>>;
    friend Base;

public:
    using Vec = typename Base::Vec;

    struct parameters_type
        : solver_parameters<parameters_type, DefaultFactory<Bicgstab, parameters_type>> {};
    using Factory = DefaultFactory<Bicgstab, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "bicgstab"; }

    Bicgstab(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
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
        auto rr = this->vec(n, m);
        auto p = this->vec(n, m);
        auto v = this->vec(n, m);
        auto s = this->vec(n, m);
        auto t = this->vec(n, m);
        auto y = this->vec(n, m);
        auto z = this->vec(n, m);
        auto prev_rho = this->vec(1, m);
        auto rho = this->vec(1, m);
        auto beta1 = this->vec(1, m);
        auto gamma = this->vec(1, m);
        auto beta2 = this->vec(1, m);
        auto omega = this->vec(1, m);
        auto norm = this->vec(1, m);
        const auto status = state.status.get_data();

        const auto rv = r->get_values();
        const auto pv = p->get_values();
        const auto vv = v->get_values();
        const auto sv = s->get_values();
        const auto tv = t->get_values();
        const auto yv = y->get_values();
        const auto zv = z->get_values();
        const auto b1v = beta1->get_values();
        const auto gv = gamma->get_values();
        const auto b2v = beta2->get_values();
        const auto ov = omega->get_values();
        const auto xv = x->get_values();
        const auto xs = x->get_stride();

        {
            const auto bv = b->get_const_values();
            const auto bs = b->get_stride();
            const auto rrv = rr->get_values();
            for (size_type j = 0; j < m; ++j) {
                prev_rho->at(0, j) = rho->at(0, j) = V{1};
                b1v[j] = gv[j] = b2v[j] = ov[j] = V{1};
            }
            kernel::run_rows(exec, "bicgstab::initialize",
                             {bytes<V>(nm), bytes<V>(8 * nm + 6 * m)}, n,
                             [&](size_type bg, size_type e) {
                                 for (size_type i = bg; i < e; ++i) {
                                     for (size_type j = 0; j < m; ++j) {
                                         const auto k = i * m + j;
                                         rv[k] = bv[i * bs + j];
                                         rrv[k] = pv[k] = vv[k] = sv[k] = tv[k] = yv[k] =
                                             zv[k] = V{};
                                     }
                                 }
                             });
        }
        auto [neg_one, one] = this->residual_scalars();
        this->get_system_matrix()->apply(neg_one.get(), x, one.get(), r.get());
        rr->copy_values(r.get());
        this->make_criterion(b, x, r.get(), state);

        size_type iter = 0;
        for (;;) {
            const bool half = iter % 2 == 1;
            bool changed = false;
            const bool done = this->check(state, iter, half ? s.get() : r.get(), nullptr, x,
                                          !half, &changed);
            if (half && changed) {
                finalize(state, rho.get(), beta1.get(), y.get(), x);
            }
            if (iter > 0) {
                this->log_iteration(state, iter);
            }
            if (done) {
                break;
            }
            const auto rhv = rho->get_values();
            if (!half) {
                rr->compute_dot(r.get(), rho.get());
                this->detect_rho_breakdown(state, r.get(), rho.get(), norm.get(), iter);
                const auto prv = prev_rho->get_const_values();
                detail::run_active(
                    exec, "bicgstab::step_1", {bytes<V>(7 * nm), bytes<V>(nm)}, n, m, status,
                    [&](size_type i, size_type j) {
                        const auto k = i * m + j;
                        const auto alpha = detail::safe_divide(prv[j], b1v[j]);
                        const auto f = detail::safe_divide(rhv[j], prv[j]) *
                                       detail::safe_divide(alpha, ov[j]);
                        pv[k] = rv[k] + f * (pv[k] - ov[j] * vv[k]);
                    });
                this->get_preconditioner()->apply(p.get(), y.get());
                this->get_system_matrix()->apply(y.get(), v.get());
                rr->compute_dot(v.get(), beta1.get());
                detail::run_active(exec, "bicgstab::step_2", {bytes<V>(4 * nm), bytes<V>(nm)},
                                   n, m, status, [&](size_type i, size_type j) {
                                       const auto k = i * m + j;
                                       const auto alpha =
                                           detail::safe_divide(rhv[j], b1v[j]);
                                       sv[k] = rv[k] - alpha * vv[k];
                                   });
            } else {
                this->get_preconditioner()->apply(s.get(), z.get());
                this->get_system_matrix()->apply(z.get(), t.get());
                s->compute_dot(t.get(), gamma.get());
                t->compute_dot(t.get(), beta2.get());
                detail::run_active(
                    exec, "bicgstab::step_3", {bytes<V>(9 * nm), bytes<V>(2 * nm + m)}, n, m,
                    status, [&](size_type i, size_type j) {
                        const auto k = i * m + j;
                        const auto alpha = detail::safe_divide(rhv[j], b1v[j]);
                        const auto w = detail::safe_divide(gv[j], b2v[j]);
                        if (i == 0) {
                            ov[j] = w;
                        }
                        xv[i * xs + j] += alpha * yv[k] + w * zv[k];
                        rv[k] = sv[k] - w * tv[k];
                    });
                std::swap(prev_rho, rho);
            }
            ++iter;
        }
        this->finish_solve(state, iter);
    }

private:
    /// x += alpha y for columns stopped on the intermediate residual.
    void finalize(typename Base::SolveState& state, const Vec* rho, const Vec* beta1,
                  const Vec* y, Vec* x) const
    {
        using V = ValueType;
        const size_type n = x->get_size().rows;
        const size_type m = x->get_size().cols;
        const auto status = state.status.get_data();
        const auto rhv = rho->get_const_values();
        const auto b1v = beta1->get_const_values();
        const auto yv = y->get_const_values();
        const auto xv = x->get_values();
        const auto xs = x->get_stride();
        kernel::run_rows(*this->get_executor(), "bicgstab::finalize",
                         {kernel::bytes<V>(4 * n * m), kernel::bytes<V>(n * m)}, n,
                         [&](size_type bg, size_type e) {
                             for (size_type i = bg; i < e; ++i) {
                                 for (size_type j = 0; j < m; ++j) {
                                     if (status[j].has_stopped() &&
                                         !status[j].is_finalized()) {
                                         xv[i * xs + j] +=
                                             detail::safe_divide(rhv[j], b1v[j]) *
                                             yv[i * m + j];
                                     }
                                 }
                             }
                         });
        for (size_type j = 0; j < m; ++j) {
            if (status[j].has_stopped() && !status[j].is_finalized()) {
                status[j].finalize();
            }
        }
    }

    parameters_type params_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_BICGSTAB_HPP_
