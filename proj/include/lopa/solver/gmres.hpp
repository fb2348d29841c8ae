// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_GMRES_HPP_
#define LOPA_SOLVER_GMRES_HPP_

#include <cmath>
#include <memory>
#include <type_traits>
#include <utility>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/solver/solver_base.hpp"

namespace lopa::solver {


/// Restarted GMRES with right preconditioning. The Arnoldi basis is
/// orthogonalized with modified Gram-Schmidt and the least-squares problem
/// is kept triangular with Givens rotations, so the residual norm is known
/// after every iteration without forming the solution. Criteria only see
/// that norm.
template <typename ValueType = double>
class Gmres : public IterativeSolver<ValueType, Gmres<ValueType>> {
    using Base = IterativeSolver<ValueType, Gmres<ValueType>>;
    friend Base;

public:
    using Vec = typename Base::Vec;

    static constexpr size_type default_krylov_dim = 100;

    struct parameters_type
        : solver_parameters<parameters_type, DefaultFactory<Gmres, parameters_type>> {
        size_type krylov_dim = default_krylov_dim;

        parameters_type& with_krylov_dim(size_type k)
        {
            krylov_dim = k;
            return *this;
        }
    };
    using Factory = DefaultFactory<Gmres, parameters_type>;

    static parameters_type build() { return {}; }
    static const char* type_name() noexcept { return "gmres"; }

    Gmres(const Factory* factory, std::shared_ptr<const LinOp> system_matrix)
        : Base(factory->get_executor(), factory->get_parameters(),
               std::move(system_matrix)),
          params_{factory->get_parameters()}
    {
        if (params_.krylov_dim == 0) {
            throw BadParameter("krylov_dim must be at least 1");
        }
    }

    const parameters_type& get_parameters() const noexcept { return params_; }
    size_type get_krylov_dim() const noexcept { return params_.krylov_dim; }

protected:
    /// Workspace of one solve.
    struct Workspace {
        size_type n, m, k;
        std::vector<std::unique_ptr<Vec>> basis;
        Array<ValueType> hessenberg;  // (k + 1) x k per column, column-major
        Array<ValueType> sin;
        Array<ValueType> cos;
        Array<ValueType> g;
        Array<ValueType> y;
        Array<size_type> final_iter;
        std::unique_ptr<Vec> residual;
        std::unique_ptr<Vec> residual_norm;
        std::unique_ptr<Vec> before;
        std::unique_ptr<Vec> after;
        std::unique_ptr<Vec> z;
        std::vector<ValueType> sums;

        ValueType& h(size_type i, size_type j, size_type c)
        {
            return hessenberg[(j * (k + 1) + i) * m + c];
        }
    };

    void solve(const Vec* b, Vec* x) const
    {
        using kernel::bytes;
        using V = ValueType;
        typename Base::SolveState state;
        if (!this->begin_solve(b, x, state)) {
            return;
        }
        const auto exec = this->get_executor();
        Workspace w;
        w.n = this->get_size().rows;
        w.m = b->get_size().cols;
        w.k = params_.krylov_dim;
        const auto n = w.n;
        const auto m = w.m;
        const auto k = w.k;
        for (size_type i = 0; i <= k; ++i) {
            w.basis.push_back(this->vec(n, m));
        }
        w.hessenberg = Array<V>{exec, (k + 1) * k * m};
        w.hessenberg.fill(V{});
        w.sin = Array<V>{exec, k * m};
        w.cos = Array<V>{exec, k * m};
        w.g = Array<V>{exec, (k + 1) * m};
        w.g.fill(V{});
        w.y = Array<V>{exec, k * m};
        w.y.fill(V{});
        w.final_iter = Array<size_type>{exec, m};
        w.residual = this->vec(n, m);
        w.residual_norm = this->vec(1, m);
        w.before = this->vec(n, m);
        w.after = this->vec(n, m);
        w.z = this->vec(n, m);

        {
            const auto bv = b->get_const_values();
            const auto bs = b->get_stride();
            const auto rv = w.residual->get_values();
            const auto sv = w.sin.get_data();
            const auto cv = w.cos.get_data();
            for (size_type i = 0; i < k * m; ++i) {
                sv[i] = cv[i] = V{};
            }
            kernel::run_rows(*exec, "gmres::initialize_1",
                             {bytes<V>(n * m), bytes<V>((n + 2 * k) * m)}, n,
                             [&](size_type bg, size_type e) {
                                 for (size_type i = bg; i < e; ++i) {
                                     for (size_type j = 0; j < m; ++j) {
                                         rv[i * m + j] = bv[i * bs + j];
                                     }
                                 }
                             });
        }
        auto [neg_one, one] = this->residual_scalars();
        this->get_system_matrix()->apply(neg_one.get(), x, one.get(), w.residual.get());
        w.residual->compute_norm2(w.residual_norm.get());
        initialize_2(w);
        this->make_criterion(b, x, w.residual.get(), state);

        size_type iter = 0;
        size_type restart_iter = 0;
        for (;;) {
            const bool done =
                this->check(state, iter, nullptr, w.residual_norm.get(), nullptr);
            if (iter > 0) {
                this->log_iteration(state, iter);
            }
            if (done) {
                break;
            }
            if (restart_iter == k) {
                update_solution(w, state, x, iter);
                w.residual->copy_values(b);
                this->get_system_matrix()->apply(neg_one.get(), x, one.get(),
                                                 w.residual.get());
                w.residual->compute_norm2(w.residual_norm.get());
                initialize_2(w);
                restart_iter = 0;
            }
            this->get_preconditioner()->apply(w.basis[restart_iter].get(), w.z.get());
            this->get_system_matrix()->apply(w.z.get(), w.basis[restart_iter + 1].get());
            arnoldi(w, state, restart_iter);
            ++restart_iter;
            ++iter;
        }
        update_solution(w, state, x, iter);
        this->finish_solve(state, iter);
    }

private:
    /// g = e_0 |r|, first basis vector r / |r|, per-cycle iteration counts 0.
    void initialize_2(Workspace& w) const
    {
        using V = ValueType;
        const auto n = w.n;
        const auto m = w.m;
        const auto rv = w.residual->get_const_values();
        const auto nv = w.residual_norm->get_const_values();
        const auto v0 = w.basis[0]->get_values();
        const auto gv = w.g.get_data();
        const auto fv = w.final_iter.get_data();
        for (size_type j = 0; j < m; ++j) {
            gv[j] = nv[j];
            fv[j] = 0;
        }
        kernel::run_rows(*this->get_executor(), "gmres::initialize_2",
                         {kernel::bytes<V>(2 * n * m),
                          kernel::bytes<V>((n + 1) * m) + kernel::bytes<size_type>(m)},
                         n, [&](size_type bg, size_type e) {
                             for (size_type i = bg; i < e; ++i) {
                                 for (size_type j = 0; j < m; ++j) {
                                     v0[i * m + j] =
                                         detail::safe_divide(rv[i * m + j], nv[j]);
                                 }
                             }
                         });
    }

    /// Orthogonalizes basis[j + 1] against basis[0..j], normalizes it and
    /// updates the rotated Hessenberg column j and the residual norms.
    void arnoldi(Workspace& w, typename Base::SolveState& state, size_type j) const
    {
        using V = ValueType;
        using kernel::bytes;
        const auto n = w.n;
        const auto m = w.m;
        const auto status = state.status.get_data();
        const Traffic traffic{
            bytes<V>(((j + 1) * (4 * n + 4) + 2 * n + 1) * m) + bytes<size_type>(m),
            bytes<V>(((j + 1) * (n + 2) + n + 6) * m) + bytes<size_type>(m)};
        const auto next = w.basis[j + 1]->get_values();
        w.sums.resize(m);
        const auto sums = w.sums.data();
        kernel::run_composite(*this->get_executor(), "gmres::arnoldi", traffic,
                              [&](const auto& rows) {
            if constexpr (std::is_same_v<std::decay_t<decltype(rows)>, kernel::SerialRows>) {
                serial_arnoldi(w, status, j);
                return;
            }
            for (size_type i = 0; i <= j; ++i) {
                const auto bi = w.basis[i]->get_const_values();
                rows.reduce(n, m, sums,
                            [&](size_type bg, size_type e, V* partial) {
                                for (size_type r = bg; r < e; ++r) {
                                    for (size_type c = 0; c < m; ++c) {
                                        partial[c] += bi[r * m + c] * next[r * m + c];
                                    }
                                }
                            });
                for (size_type c = 0; c < m; ++c) {
                    if (!status[c].has_stopped()) {
                        w.h(i, j, c) = sums[c];
                    }
                }
                rows.each(n, [&](size_type bg, size_type e) {
                    for (size_type r = bg; r < e; ++r) {
                        for (size_type c = 0; c < m; ++c) {
                            if (!status[c].has_stopped()) {
                                next[r * m + c] -= w.h(i, j, c) * bi[r * m + c];
                            }
                        }
                    }
                });
            }
            rows.reduce(n, m, sums, [&](size_type bg, size_type e, V* partial) {
                for (size_type r = bg; r < e; ++r) {
                    for (size_type c = 0; c < m; ++c) {
                        partial[c] += next[r * m + c] * next[r * m + c];
                    }
                }
            });
            for (size_type c = 0; c < m; ++c) {
                if (!status[c].has_stopped()) {
                    w.h(j + 1, j, c) = std::sqrt(sums[c]);
                }
            }
            rows.each(n, [&](size_type bg, size_type e) {
                for (size_type r = bg; r < e; ++r) {
                    for (size_type c = 0; c < m; ++c) {
                        if (!status[c].has_stopped()) {
                            const auto hn = w.h(j + 1, j, c);
                            next[r * m + c] =
                                hn == V{} ? V{} : next[r * m + c] / hn;
                        }
                    }
                }
            });
        });
        for (size_type c = 0; c < m; ++c) {
            if (!status[c].has_stopped()) {
                rotate(w, j, c);
                ++w.final_iter[c];
            }
        }
    }

    /// Same arithmetic as the blocked path with one block, column by column.
    /// The subtraction of basis i - 1 is fused with the dot against basis i,
    /// and each sum starts from its first term (assumes n > 0).
    static void serial_arnoldi(Workspace& w, const stop::StoppingStatus* status, size_type j)
    {
        using V = ValueType;
        const auto n = w.n;
        const auto m = w.m;
        const auto next = w.basis[j + 1]->get_values();
        // next -= s * prev (skipped when prev is null), returning the dot of
        // the result with `dot`, or with itself when dot is null.
        auto step = [&](size_type c, V s, const V* prev, const V* dot) {
            V acc{};
            for (size_type r = 0; r < n; ++r) {
                const auto v =
                    prev != nullptr ? next[r * m + c] - s * prev[r * m + c] : next[r * m + c];
                next[r * m + c] = v;
                const auto term = (dot != nullptr ? dot[r * m + c] : v) * v;
                acc = r == 0 ? term : acc + term;
            }
            return acc;
        };
        for (size_type c = 0; c < m; ++c) {
            if (status[c].has_stopped()) {
                continue;
            }
            auto s = step(c, V{}, nullptr, w.basis[0]->get_const_values());
            w.h(0, j, c) = s;
            for (size_type i = 1; i <= j; ++i) {
                s = step(c, s, w.basis[i - 1]->get_const_values(),
                         w.basis[i]->get_const_values());
                w.h(i, j, c) = s;
            }
            const auto hn = std::sqrt(step(c, s, w.basis[j]->get_const_values(), nullptr));
            w.h(j + 1, j, c) = hn;
            for (size_type r = 0; r < n; ++r) {
                next[r * m + c] = hn == V{} ? V{} : next[r * m + c] / hn;
            }
        }
    }

    /// Applies the stored rotations to column j, computes a new one that
    /// annihilates h(j + 1, j), and rotates g accordingly.
    static void rotate(Workspace& w, size_type j, size_type c)
    {
        using V = ValueType;
        const auto m = w.m;
        auto carry = w.h(0, j, c);
        for (size_type i = 0; i < j; ++i) {
            const auto cs = w.cos[i * m + c];
            const auto sn = w.sin[i * m + c];
            const auto b = w.h(i + 1, j, c);
            w.h(i, j, c) = cs * carry + sn * b;
            carry = -sn * carry + cs * b;
        }
        w.h(j, j, c) = carry;
        const auto a = carry;
        const auto b = w.h(j + 1, j, c);
        V cs{};
        V sn{1};
        if (a != V{}) {
            const auto scale = std::abs(a) + std::abs(b);
            const auto hyp = scale * std::sqrt((a / scale) * (a / scale) +
                                               (b / scale) * (b / scale));
            cs = a / hyp;
            sn = b / hyp;
        }
        w.cos[j * m + c] = cs;
        w.sin[j * m + c] = sn;
        w.h(j, j, c) = cs * a + sn * b;
        w.h(j + 1, j, c) = V{};
        const auto gj = w.g[j * m + c];
        w.g[(j + 1) * m + c] = -sn * gj;
        w.g[j * m + c] = cs * gj;
        w.residual_norm->at(0, c) = std::abs(w.g[(j + 1) * m + c]);
    }

    /// Solves the triangular least-squares system of the current cycle and
    /// adds the preconditioned correction to x.
    void update_solution(Workspace& w, typename Base::SolveState& state, Vec* x,
                         size_type iter) const
    {
        using V = ValueType;
        using kernel::bytes;
        const auto n = w.n;
        const auto m = w.m;
        uint64 tri = 0;
        uint64 cols = 0;
        for (size_type c = 0; c < m; ++c) {
            const uint64 f = w.final_iter[c];
            tri += f * (f + 1) / 2 + 2 * f;
            cols += f;
        }
        const Traffic traffic{bytes<V>(tri + n * cols), bytes<V>(cols + n * m)};
        const auto before = w.before->get_values();
        bool singular = false;
        kernel::run_composite(*this->get_executor(), "gmres::step_2", traffic,
                              [&](const auto& rows) {
            for (size_type c = 0; c < m; ++c) {
                const auto f = w.final_iter[c];
                for (size_type ii = f; ii-- > 0;) {
                    auto s = w.g[ii * m + c];
                    for (size_type l = ii + 1; l < f; ++l) {
                        s -= w.h(ii, l, c) * w.y[l * m + c];
                    }
                    const auto d = w.h(ii, ii, c);
                    if (d == V{}) {
                        singular = singular || s != V{};
                        w.y[ii * m + c] = V{};
                    } else {
                        w.y[ii * m + c] = s / d;
                    }
                }
            }
            rows.each(n, [&](size_type bg, size_type e) {
                for (size_type r = bg; r < e; ++r) {
                    for (size_type c = 0; c < m; ++c) {
                        V s{};
                        for (size_type l = 0; l < w.final_iter[c]; ++l) {
                            s += w.basis[l]->get_const_values()[r * m + c] *
                                 w.y[l * m + c];
                        }
                        before[r * m + c] = s;
                    }
                }
            });
        });
        if (singular) {
            if (!state.info.breakdown) {
                state.info.breakdown_iteration = iter;
            }
            for (size_type c = 0; c < m; ++c) {
                this->mark_breakdown(state, c, iter);
            }
            state.info.breakdown = true;
        }
        this->get_preconditioner()->apply(w.before.get(), w.after.get());
        auto one = Vec::create_scalar(this->get_executor(), V{1});
        x->add_scaled(one.get(), w.after.get());
    }

    parameters_type params_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_GMRES_HPP_
