// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_ITERATION_HPP_
#define LOPA_STOP_ITERATION_HPP_

#include <memory>

#include "lopa/core/linop.hpp"
#include "lopa/stop/criterion.hpp"

namespace lopa::stop {


/// Stops every running column once `max_iters` iterations are done.
class Iteration : public Criterion {
public:
    struct parameters_type
        : enable_parameters<parameters_type,
                            DefaultCriterionFactory<Iteration, parameters_type>> {
        size_type max_iters = 0;

        parameters_type& with_max_iters(size_type value)
        {
            max_iters = value;
            return *this;
        }
    };
    using Factory = DefaultCriterionFactory<Iteration, parameters_type>;

    static parameters_type build() { return {}; }

    Iteration(const Factory* factory, const CriterionArgs&)
        : Criterion(factory->get_executor()), params_{factory->get_parameters()}
    {}

    const parameters_type& get_parameters() const noexcept { return params_; }

protected:
    void check_impl(uint8 stopping_id, bool set_finalized,
                    Array<StoppingStatus>* status, bool* one_changed,
                    const Updater& updater) override
    {
        if (updater.num_iterations_ < params_.max_iters) {
            return;
        }
        for (auto& s : *status) {
            if (!s.has_stopped()) {
                s.stop(stopping_id, set_finalized);
                *one_changed = true;
            }
        }
    }

    std::string log_name() const override { return "iteration"; }

private:
    parameters_type params_;
};


}  // namespace lopa::stop

#endif  // LOPA_STOP_ITERATION_HPP_
