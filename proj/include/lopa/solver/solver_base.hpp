// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_SOLVER_SOLVER_BASE_HPP_
#define LOPA_SOLVER_SOLVER_BASE_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/log/logger.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/stop/combined.hpp"
#include "lopa/stop/criterion.hpp"
#include "lopa/stop/stopping_status.hpp"

namespace lopa::solver {


/// Outcome of the most recent apply.
struct SolveInfo {
    size_type iterations = 0;
    bool breakdown = false;
    size_type breakdown_iteration = 0;
    std::vector<stop::StoppingStatus> status;

    bool all_converged() const noexcept
    {
        for (const auto& s : status) {
            if (!s.has_converged()) {
                return false;
            }
        }
        return !status.empty();
    }
};


/// Parameters shared by every iterative solver.
template <typename Derived, typename Factory>
struct solver_parameters : enable_parameters<Derived, Factory> {
    std::vector<std::shared_ptr<const stop::CriterionFactory>> criteria;
    std::shared_ptr<const LinOpFactory> preconditioner;
    std::shared_ptr<const LinOp> generated_preconditioner;

    template <typename... Factories>
    Derived& with_criteria(Factories&&... factories)
    {
        (criteria.push_back(std::shared_ptr<const stop::CriterionFactory>(
             std::forward<Factories>(factories))),
         ...);
        return self();
    }

    Derived& with_criteria(std::vector<std::shared_ptr<const stop::CriterionFactory>> list)
    {
        criteria.insert(criteria.end(), list.begin(), list.end());
        return self();
    }

    Derived& with_preconditioner(std::shared_ptr<const LinOpFactory> factory)
    {
        preconditioner = std::move(factory);
        return self();
    }

    Derived& with_generated_preconditioner(std::shared_ptr<const LinOp> op)
    {
        generated_preconditioner = std::move(op);
        return self();
    }

private:
    Derived& self() noexcept { return static_cast<Derived&>(*this); }
};


namespace detail {


/// a / b, or zero when b is exactly zero.
template <typename T>
inline T safe_divide(T a, T b) noexcept
{
    return b == T{} ? T{} : a / b;
}


/// Elementwise solver step: f(i, j) for every row and every column that has
/// not stopped.
template <typename F>
void run_active(const Executor& exec, const char* name, Traffic traffic, size_type rows,
                size_type cols, const stop::StoppingStatus* status, F&& f)
{
    kernel::run_rows(exec, name, traffic, rows, [&](size_type begin, size_type end) {
        for (size_type i = begin; i < end; ++i) {
            for (size_type j = 0; j < cols; ++j) {
                if (!status[j].has_stopped()) {
                    f(i, j);
                }
            }
        }
    });
}


}  // namespace detail


/// Common machinery of the iterative solvers: system matrix, generated
/// preconditioner, criterion factory and per-apply bookkeeping. `Concrete`
/// implements `solve(const Vec* b, Vec* x) const`.
template <typename ValueType, typename Concrete>
class IterativeSolver : public EnableLinOp<Concrete> {
    using Base = EnableLinOp<Concrete>;

public:
    using value_type = ValueType;
    using Vec = matrix::Dense<ValueType>;

    const std::shared_ptr<const LinOp>& get_system_matrix() const noexcept
    {
        return system_matrix_;
    }

    const std::shared_ptr<const LinOp>& get_preconditioner() const noexcept
    {
        return preconditioner_;
    }

    const std::shared_ptr<const stop::CriterionFactory>& get_stop_criterion_factory()
        const noexcept
    {
        return criterion_factory_;
    }

    SolveInfo get_solve_info() const
    {
        std::lock_guard guard{info_mutex_};
        return info_;
    }

    IterativeSolver(const IterativeSolver& other)
        : Base(other),
          system_matrix_{other.system_matrix_},
          preconditioner_{other.preconditioner_},
          criterion_factory_{other.criterion_factory_},
          info_{other.get_solve_info()}
    {}

    IterativeSolver(IterativeSolver&& other)
        : Base(std::move(other)),
          system_matrix_{std::move(other.system_matrix_)},
          preconditioner_{std::move(other.preconditioner_)},
          criterion_factory_{std::move(other.criterion_factory_)},
          info_{other.get_solve_info()}
    {}

    IterativeSolver& operator=(const IterativeSolver& other)
    {
        if (this != &other) {
            Base::operator=(other);
            system_matrix_ = other.system_matrix_;
            preconditioner_ = other.preconditioner_;
            criterion_factory_ = other.criterion_factory_;
            auto info = other.get_solve_info();
            std::lock_guard guard{info_mutex_};
            info_ = std::move(info);
        }
        return *this;
    }

protected:
    template <typename Params>
    IterativeSolver(std::shared_ptr<const Executor> exec, const Params& params,
                    std::shared_ptr<const LinOp> system_matrix)
        : Base(exec, system_matrix->get_size()), system_matrix_{std::move(system_matrix)}
    {
        if (!system_matrix_->get_size().is_square()) {
            throw DimensionMismatch("solver for non-square operator " +
                                    lopa::detail::dims(system_matrix_->get_size()));
        }
        if (params.criteria.empty()) {
            throw BadParameter("solver without stopping criteria");
        }
        if (params.preconditioner && params.generated_preconditioner) {
            throw BadParameter(
                "both a preconditioner factory and a generated preconditioner");
        }
        criterion_factory_ = params.criteria.size() == 1
                                 ? params.criteria.front()
                                 : stop::combine(exec, params.criteria);
        if (params.generated_preconditioner) {
            preconditioner_ = params.generated_preconditioner;
            if (preconditioner_->get_size() != system_matrix_->get_size()) {
                throw DimensionMismatch("generated preconditioner is " +
                                        lopa::detail::dims(preconditioner_->get_size()));
            }
        } else if (params.preconditioner) {
            preconditioner_ = params.preconditioner->generate(system_matrix_);
        } else {
            preconditioner_ = Identity::create(exec, system_matrix_->get_size().rows);
        }
    }

    void apply_impl(const LinOp* b, LinOp* x) const override
    {
        const auto& self = static_cast<const Concrete&>(*this);
        auto db = as<const Vec>(b);
        auto dx = as<Vec>(x);
        if (db == nullptr || dx == nullptr) {
            throw NotSupported("solver operands must be dense of the solver value type");
        }
        self.solve(db, dx);
    }

    /// x = alpha S(b) + beta x, with S started from the current x.
    void apply_impl(const LinOp* alpha, const LinOp* b, const LinOp* beta,
                    LinOp* x) const override
    {
        auto dx = as<Vec>(x);
        auto solution = Vec::create(this->get_executor(), dx->get_size());
        solution->copy_values(dx);
        apply_impl(b, solution.get());
        dx->scale(beta);
        dx->add_scaled(alpha, solution.get());
    }

    void rebind_executor(std::shared_ptr<const Executor> exec) override
    {
        system_matrix_ = std::shared_ptr<const LinOp>(system_matrix_->clone_linop(exec));
        preconditioner_ = std::shared_ptr<const LinOp>(preconditioner_->clone_linop(exec));
        Base::rebind_executor(std::move(exec));
    }

    /// Per-solve state every solver needs.
    struct SolveState {
        Array<stop::StoppingStatus> status;
        std::unique_ptr<stop::Criterion> criterion;
        SolveInfo info;
        stop::CheckReport report;
    };

    /// Handles an all-zero right-hand side (x = 0, converged at iteration 0)
    /// and otherwise prepares the status array. Returns false if the solve
    /// is already complete.
    bool begin_solve(const Vec* b, Vec* x, SolveState& state) const
    {
        const auto m = b->get_size().cols;
        state.status = Array<stop::StoppingStatus>{this->get_executor(), m};
        for (auto& s : state.status) {
            s.reset();
        }
        auto norms = Vec::create(this->get_executor(), {1, m});
        b->compute_norm2(norms.get(), TrafficChannel::criterion);
        bool zero = true;
        for (size_type j = 0; j < m; ++j) {
            zero = zero && norms->at(0, j) == ValueType{};
        }
        if (!zero) {
            return true;
        }
        for (size_type i = 0; i < x->get_size().rows; ++i) {
            for (size_type j = 0; j < m; ++j) {
                x->at(i, j) = ValueType{};
            }
        }
        for (auto& s : state.status) {
            s.converge(1, true);
        }
        finish_solve(state, 0);
        return false;
    }

    /// Generates the criterion for this solve; it inherits the solver's loggers.
    void make_criterion(const Vec* b, const Vec* x, const LinOp* initial_residual,
                        SolveState& state) const
    {
        stop::CriterionArgs args;
        args.system_matrix = system_matrix_;
        args.b = std::shared_ptr<const LinOp>(std::shared_ptr<const LinOp>{}, b);
        args.x = x;
        args.initial_residual = initial_residual;
        state.criterion = criterion_factory_->generate(args);
        this->forward_loggers_to(*state.criterion);
    }

    /// Runs the criterion; returns true if every column has stopped.
    bool check(SolveState& state, size_type iter, const LinOp* residual,
               const LinOp* residual_norm, const LinOp* solution,
               bool set_finalized = true, bool* one_changed = nullptr) const
    {
        auto updater = state.criterion->update();
        updater.num_iterations(iter).residual(residual).residual_norm(residual_norm).solution(
            solution);
        bool changed = false;
        const bool all = updater.check(1, set_finalized, &state.status, &changed);
        if (one_changed != nullptr) {
            *one_changed = changed;
        }
        state.report = updater.report_;
        return all;
    }

    void log_iteration(const SolveState& state, size_type iter) const
    {
        if (this->logs(log::EventKind::iteration_complete)) {
            log::Event e;
            e.kind = log::EventKind::iteration_complete;
            e.iteration = iter;
            e.residual_norms = state.report.residual_norms;
            e.relative_residual_norms = state.report.relative_residual_norms;
            this->emit(e);
        }
    }

    /// Stops column j for breakdown.
    void mark_breakdown(SolveState& state, size_type j, size_type iter) const
    {
        if (!state.status[j].has_stopped()) {
            state.status[j].stop(stop::StoppingStatus::breakdown_id, true);
            if (!state.info.breakdown) {
                state.info.breakdown_iteration = iter;
            }
            state.info.breakdown = true;
        }
    }

    /// rho = 0 with a nonzero residual means the shadow residual became
    /// orthogonal to the residual.
    void detect_rho_breakdown(SolveState& state, const Vec* r, const Vec* rho,
                          Vec* norm, size_type iter) const
    {
        bool any = false;
        for (size_type j = 0; j < rho->get_size().cols; ++j) {
            any = any || (rho->at(0, j) == ValueType{} && !state.status[j].has_stopped());
        }
        if (!any) {
            return;
        }
        r->compute_norm2(norm, TrafficChannel::criterion);
        for (size_type j = 0; j < rho->get_size().cols; ++j) {
            if (rho->at(0, j) == ValueType{} && norm->at(0, j) != ValueType{}) {
                mark_breakdown(state, j, iter);
            }
        }
    }


    void finish_solve(SolveState& state, size_type iter) const
    {
        state.info.iterations = iter;
        state.info.status.assign(state.status.begin(), state.status.end());
        std::lock_guard guard{info_mutex_};
        info_ = state.info;
    }

    /// Alpha = -1 and beta = 1, as used for r = b - A x.
    std::pair<std::unique_ptr<Vec>, std::unique_ptr<Vec>> residual_scalars() const
    {
        return {Vec::create_scalar(this->get_executor(), ValueType{-1}),
                Vec::create_scalar(this->get_executor(), ValueType{1})};
    }

    std::unique_ptr<Vec> vec(size_type rows, size_type cols) const
    {
        return Vec::create(this->get_executor(), {rows, cols});
    }

    std::string log_name() const override { return Concrete::type_name(); }

private:
    std::shared_ptr<const LinOp> system_matrix_;
    std::shared_ptr<const LinOp> preconditioner_;
    std::shared_ptr<const stop::CriterionFactory> criterion_factory_;
    mutable std::mutex info_mutex_;
    mutable SolveInfo info_;
};


}  // namespace lopa::solver

#endif  // LOPA_SOLVER_SOLVER_BASE_HPP_
