// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_STOP_TIME_HPP_
#define LOPA_STOP_TIME_HPP_

#include <chrono>
#include <memory>

#include "lopa/core/linop.hpp"
#include "lopa/stop/criterion.hpp"

namespace lopa::stop {


/// Stops every running column once `time_limit` has elapsed since the
/// criterion was generated.
class Time : public Criterion {
public:
    using clock = std::chrono::steady_clock;

    struct parameters_type
        : enable_parameters<parameters_type,
                            DefaultCriterionFactory<Time, parameters_type>> {
        std::chrono::nanoseconds time_limit{std::chrono::seconds{10}};

        template <typename Rep, typename Period>
        parameters_type& with_time_limit(std::chrono::duration<Rep, Period> value)
        {
            time_limit = std::chrono::duration_cast<std::chrono::nanoseconds>(value);
            return *this;
        }
    };
    using Factory = DefaultCriterionFactory<Time, parameters_type>;

    static parameters_type build() { return {}; }

    Time(const Factory* factory, const CriterionArgs&)
        : Criterion(factory->get_executor()),
          params_{factory->get_parameters()},
          start_{clock::now()}
    {}

    clock::time_point get_start() const noexcept { return start_; }

protected:
    void check_impl(uint8 stopping_id, bool set_finalized,
                    Array<StoppingStatus>* status, bool* one_changed,
                    const Updater&) override
    {
        if (clock::now() - start_ < params_.time_limit) {
            return;
        }
        for (auto& s : *status) {
            if (!s.has_stopped()) {
                s.stop(stopping_id, set_finalized);
                *one_changed = true;
            }
        }
    }

    std::string log_name() const override { return "time"; }

private:
    parameters_type params_;
    clock::time_point start_;
};


}  // namespace lopa::stop

#endif  // LOPA_STOP_TIME_HPP_
