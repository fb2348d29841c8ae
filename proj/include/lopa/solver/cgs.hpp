// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_CGS_HPP_
#define LOPA_SOLVER_CGS_HPP_

#include <memory>
#include <utility>

#include "lopa/core/kernel.hpp"
#include "lopa/solver/solver_base.hpp"

namespace lopa::solver {


/// Conjugate gradient squared. One iteration consists of two halves, each
/// followed by a criterion check; the iteration count is in halves.
template <typename ValueType = double>
class Cgs : public IterativeSolver<ValueType, Cgs<ValueType>> {
    using Base = IterativeSolver<ValueType, Cgs<ValueType>>;
    friend Base;

public:
    using Vec = typename Base::Vec;

    struct parameters_type
        : solver_parameters<parameters_type, DefaultFactory<Cgs, parameters_type>> {};
    using Factory = DefaultFactory<Cgs, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "cgs"; }

    Cgs(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
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
        auto r_tld = this->vec(n, m);
        auto p = this->vec(n, m);
        auto q = this->vec(n, m);
        auto u = this->vec(n, m);
        auto u_hat = this->vec(n, m);
        auto v_hat = this->vec(n, m);
        auto t = this->vec(n, m);
        auto prev_rho = this->vec(1, m);
        auto rho = this->vec(1, m);
        auto gamma = this->vec(1, m);
        auto alpha = this->vec(1, m);
        auto norm = this->vec(1, m);
        const auto status = state.status.get_data();

        const auto rv = r->get_values();
        const auto pv = p->get_values();
        const auto qv = q->get_values();
        const auto uv = u->get_values();
        const auto uhv = u_hat->get_values();
        const auto vhv = v_hat->get_values();
        const auto tv = t->get_values();
        const auto av = alpha->get_values();
        const auto xv = x->get_values();
        const auto xs = x->get_stride();

        {
            const auto bv = b->get_const_values();
            const auto bs = b->get_stride();
            const auto rtv = r_tld->get_values();
            for (size_type j = 0; j < m; ++j) {
                prev_rho->at(0, j) = V{1};
                rho->at(0, j) = V{};
            }
            kernel::run_rows(exec, "cgs::initialize",
                             {bytes<V>(nm), bytes<V>(8 * nm + 2 * m)}, n,
                             [&](size_type bg, size_type e) {
                                 for (size_type i = bg; i < e; ++i) {
                                     for (size_type j = 0; j < m; ++j) {
                                         const auto k = i * m + j;
                                         rv[k] = bv[i * bs + j];
                                         rtv[k] = pv[k] = qv[k] = uv[k] = uhv[k] =
                                             vhv[k] = tv[k] = V{};
                                     }
                                 }
                             });
        }
        auto [neg_one, one] = this->residual_scalars();
        this->get_system_matrix()->apply(neg_one.get(), x, one.get(), r.get());
        r_tld->copy_values(r.get());
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
            if (iter % 2 == 0) {
                r->compute_dot(r_tld.get(), rho.get());
                this->detect_rho_breakdown(state, r.get(), rho.get(), norm.get(), iter);
                const auto rhv = rho->get_const_values();
                const auto prv = prev_rho->get_const_values();
                detail::run_active(exec, "cgs::step_1", {bytes<V>(5 * nm), bytes<V>(2 * nm)},
                                   n, m, status, [&](size_type i, size_type j) {
                                       const auto k = i * m + j;
                                       const auto beta = detail::safe_divide(rhv[j], prv[j]);
                                       uv[k] = rv[k] + beta * qv[k];
                                       pv[k] = uv[k] + beta * (qv[k] + beta * pv[k]);
                                   });
                this->get_preconditioner()->apply(p.get(), t.get());
                this->get_system_matrix()->apply(t.get(), v_hat.get());
                r_tld->compute_dot(v_hat.get(), gamma.get());
                const auto gv = gamma->get_const_values();
                detail::run_active(
                    exec, "cgs::step_2", {bytes<V>(4 * nm), bytes<V>(2 * nm + m)}, n, m,
                    status, [&](size_type i, size_type j) {
                        const auto k = i * m + j;
                        const auto a = detail::safe_divide(rhv[j], gv[j]);
                        if (i == 0) {
                            av[j] = a;
                        }
                        qv[k] = uv[k] - a * vhv[k];
                        tv[k] = uv[k] + qv[k];
                    });
            } else {
                this->get_preconditioner()->apply(t.get(), u_hat.get());
                this->get_system_matrix()->apply(u_hat.get(), t.get());
                detail::run_active(exec, "cgs::step_3", {bytes<V>(5 * nm), bytes<V>(2 * nm)},
                                   n, m, status, [&](size_type i, size_type j) {
                                       const auto k = i * m + j;
                                       rv[k] -= av[j] * tv[k];
                                       xv[i * xs + j] += av[j] * uhv[k];
                                   });
                std::swap(prev_rho, rho);
            }
            ++iter;
        }
        this->finish_solve(state, iter);
    }

private:
    parameters_type params_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_CGS_HPP_
