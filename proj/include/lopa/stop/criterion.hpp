// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_CRITERION_HPP_
#define LOPA_STOP_CRITERION_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/log/logger.hpp"
#include "lopa/stop/stopping_status.hpp"

namespace lopa::stop {


/// What a solver hands to a criterion factory at the start of a solve.
struct CriterionArgs {
    std::shared_ptr<const LinOp> system_matrix;
    std::shared_ptr<const LinOp> b;
    const LinOp* x = nullptr;
    const LinOp* initial_residual = nullptr;
};


/// Values criteria computed during a check, for loggers.
struct CheckReport {
    std::vector<double> residual_norms;
    std::vector<double> relative_residual_norms;
};


/// Single-solve predicate over the columns of a stopping-status array.
class Criterion : public log::Loggable {
public:
    /// Iteration state passed to `check`; residual data is optional.
    class Updater {
    public:
        explicit Updater(Criterion* parent = nullptr) : parent_{parent} {}

        Updater& num_iterations(size_type k) noexcept
        {
            num_iterations_ = k;
            return *this;
        }
        Updater& residual(const LinOp* r) noexcept
        {
            residual_ = r;
            return *this;
        }
        Updater& residual_norm(const LinOp* norm) noexcept
        {
            residual_norm_ = norm;
            return *this;
        }
        Updater& solution(const LinOp* x) noexcept
        {
            solution_ = x;
            return *this;
        }

        bool check(uint8 stopping_id, bool set_finalized,
                   Array<StoppingStatus>* status, bool* one_changed) const
        {
            return parent_->check(stopping_id, set_finalized, status, one_changed,
                                  *this);
        }

        size_type num_iterations_ = 0;
        const LinOp* residual_ = nullptr;
        const LinOp* residual_norm_ = nullptr;
        const LinOp* solution_ = nullptr;
        mutable CheckReport report_;

    private:
        Criterion* parent_;
    };

    Updater update() { return Updater{this}; }

    /// Stops columns this criterion considers done and returns true iff all
    /// columns have stopped.
    bool check(uint8 stopping_id, bool set_finalized, Array<StoppingStatus>* status,
               bool* one_changed, const Updater& updater)
    {
        bool changed = false;
        check_impl(stopping_id, set_finalized, status, &changed, updater);
        const bool all = all_stopped(*status);
        if (one_changed != nullptr) {
            *one_changed = changed;
        }
        if (logs(log::EventKind::criterion_check_completed)) {
            log::Event e;
            e.kind = log::EventKind::criterion_check_completed;
            e.iteration = updater.num_iterations_;
            e.residual_norms = updater.report_.residual_norms;
            e.relative_residual_norms = updater.report_.relative_residual_norms;
            e.all_stopped = all;
            e.one_changed = changed;
            e.stopping_id = stopping_id;
            emit(e);
        }
        return all;
    }

    const std::shared_ptr<const Executor>& get_executor() const noexcept
    {
        return exec_;
    }

protected:
    explicit Criterion(std::shared_ptr<const Executor> exec) : exec_{std::move(exec)} {}

    /// Marks stopped columns; sets *one_changed if any column changed.
    virtual void check_impl(uint8 stopping_id, bool set_finalized,
                            Array<StoppingStatus>* status, bool* one_changed,
                            const Updater& updater) = 0;

    std::string log_name() const override { return "criterion"; }

private:
    std::shared_ptr<const Executor> exec_;
};


/// Produces a fresh criterion for every solve.
class CriterionFactory : public log::Loggable {
public:
    virtual ~CriterionFactory() = default;

    std::unique_ptr<Criterion> generate(const CriterionArgs& args) const
    {
        auto result = generate_impl(args);
        forward_loggers_to(*result);
        return result;
    }

    const std::shared_ptr<const Executor>& get_executor() const noexcept
    {
        return exec_;
    }

protected:
    explicit CriterionFactory(std::shared_ptr<const Executor> exec)
        : exec_{std::move(exec)}
    {}

    virtual std::unique_ptr<Criterion> generate_impl(const CriterionArgs& args) const = 0;

    std::string log_name() const override { return "criterion_factory"; }

private:
    std::shared_ptr<const Executor> exec_;
};


/// Factory holding `Params` whose products are built as
/// `Product(const Factory*, const CriterionArgs&)`.
template <typename Product, typename Params>
class DefaultCriterionFactory : public CriterionFactory {
public:
    using parameters_type = Params;

    DefaultCriterionFactory(std::shared_ptr<const Executor> exec, Params params)
        : CriterionFactory(std::move(exec)), params_{std::move(params)}
    {}

    const Params& get_parameters() const noexcept { return params_; }

protected:
    std::unique_ptr<Criterion> generate_impl(const CriterionArgs& args) const override
    {
        return std::make_unique<Product>(this, args);
    }

private:
    Params params_;
};


}  // namespace lopa::stop

#endif  // LOPA_STOP_CRITERION_HPP_
